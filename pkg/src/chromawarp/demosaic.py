"""Bayer mosaicking, Malvar-He-Cutler linear demosaicking and sequential refinement.

Each missing color is estimated as a bilinear average of its own channel
plus a gained Laplacian of the channel sampled at that pixel:

* G at R/B sites: cross average of G + ``alpha`` * (5-point Laplacian)
* R/B at G sites: two-neighbour average + ``beta`` * (9-point G Laplacian)
* R at B sites (and B at R sites): diagonal average + ``gamma`` * Laplacian

so every filter reduces to a fixed 5x5 stencil over the mosaic.  The mosaic
is extended by mirroring about the edge sample, which keeps every extended
sample on the correct color parity.
"""

from dataclasses import dataclass
import enum

import numpy as np

from ._validation import check_image

ALPHA = 0.5
BETA = 5.0 / 8.0
GAMMA = 0.75


class CfaPattern(enum.Enum):
    """Bayer phase; the value lists the colors of the top-left 2x2 cell row-major."""

    RGGB = "RGGB"
    BGGR = "BGGR"
    GRBG = "GRBG"
    GBRG = "GBRG"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(
                f"unknown CFA pattern {value!r}; expected one of rggb, bggr, grbg, gbrg"
            ) from None

    def channel_map(self, h, w):
        """``(h, w)`` array of channel indices (0=R, 1=G, 2=B) sampled per pixel."""
        cell = np.array(["RGB".index(ch) for ch in self.value]).reshape(2, 2)
        return np.tile(cell, ((h + 1) // 2, (w + 1) // 2))[:h, :w]


@dataclass(frozen=True, eq=False)
class MosaicImage:
    plane: np.ndarray
    pattern: CfaPattern

    def __post_init__(self):
        if self.plane.ndim != 2 or min(self.plane.shape) < 2:
            raise ValueError(f"a mosaic needs at least 2x2 pixels, got {self.plane.shape}")


def mosaic(img, pattern):
    """Keep only the channel the CFA samples at each pixel."""
    img = check_image(img)
    pattern = CfaPattern.coerce(pattern)
    h, w = img.shape[:2]
    ch = pattern.channel_map(h, w)
    plane = np.take_along_axis(img, ch[:, :, None], axis=2)[:, :, 0]
    return MosaicImage(np.ascontiguousarray(plane), pattern)


def _stencil(entries):
    k = np.zeros((5, 5))
    for (dr, dc), v in entries.items():
        k[dr + 2, dc + 2] += v
    return k


def hqli_filters(alpha=ALPHA, beta=BETA, gamma=GAMMA):
    """The four 5x5 demosaicking stencils for the given gains.

    Returns a dict with keys ``'g_at_rb'``, ``'rb_at_g_row'`` (the wanted
    color lies left/right), ``'rb_at_g_col'`` (it lies above/below) and
    ``'rb_at_br'`` (R at B sites or B at R sites).
    """
    cross1 = {(-1, 0): 0.25, (1, 0): 0.25, (0, -1): 0.25, (0, 1): 0.25}
    cross2 = {(-2, 0): -0.25, (2, 0): -0.25, (0, -2): -0.25, (0, 2): -0.25}
    diag1 = {(-1, -1): 0.25, (-1, 1): 0.25, (1, -1): 0.25, (1, 1): 0.25}
    lap5 = {(0, 0): 1.0, **cross2}

    def combine(avg, lap, gain):
        return _stencil(avg) + gain * _stencil(lap)

    lap_row = {(0, 0): 1.0, (-1, -1): -0.2, (-1, 1): -0.2, (1, -1): -0.2, (1, 1): -0.2,
               (0, -2): -0.2, (0, 2): -0.2, (-2, 0): 0.1, (2, 0): 0.1}
    lap_col = {(c, r): v for (r, c), v in lap_row.items()}
    return {
        "g_at_rb": combine(cross1, lap5, alpha),
        "rb_at_g_row": combine({(0, -1): 0.5, (0, 1): 0.5}, lap_row, beta),
        "rb_at_g_col": combine({(-1, 0): 0.5, (1, 0): 0.5}, lap_col, beta),
        "rb_at_br": combine(diag1, lap5, gamma),
    }


def _correlate5(padded, k, h, w):
    out = np.zeros((h, w))
    for dr in range(5):
        for dc in range(5):
            v = k[dr, dc]
            if v != 0.0:
                out += v * padded[dr:dr + h, dc:dc + w]
    return out


def demosaic_hqli(mos, alpha=ALPHA, beta=BETA, gamma=GAMMA):
    """Reconstruct a full RGB image from a Bayer mosaic.

    Sampled values pass through unchanged; the other two channels at each
    pixel come from the stencils of :func:`hqli_filters`.
    """
    plane = np.asarray(mos.plane, dtype=np.float64)
    h, w = plane.shape
    ch = mos.pattern.channel_map(h, w)
    padded = np.pad(plane, 2, mode="reflect")
    filt = hqli_filters(alpha, beta, gamma)
    est = {name: _correlate5(padded, k, h, w) for name, k in filt.items()}

    rows = np.arange(h)[:, None]
    is_r, is_g, is_b = ch == 0, ch == 1, ch == 2
    # at a G site, does the row carry R samples (R lies left/right)?
    row_has_r = np.zeros((h, w), dtype=bool)
    r_rows = np.unique(np.nonzero(is_r)[0] % 2)
    row_has_r[:] = np.isin(rows % 2, r_rows)

    out = np.empty((h, w, 3))
    out[:, :, 1] = np.where(is_g, plane, est["g_at_rb"])
    for c, own, other in ((0, is_r, is_b), (2, is_b, is_r)):
        own_row = row_has_r if c == 0 else ~row_has_r
        at_g = np.where(own_row, est["rb_at_g_row"], est["rb_at_g_col"])
        vals = np.where(own, plane, np.where(other, est["rb_at_br"], at_g))
        out[:, :, c] = vals
    return out


DEFAULT_SEQUENCE = (CfaPattern.GRBG, CfaPattern.RGGB, CfaPattern.BGGR)


def sequential_refine(img, patterns=DEFAULT_SEQUENCE, alpha=ALPHA, beta=BETA, gamma=GAMMA,
                      clamp=True):
    """Re-estimate every channel by repeated mosaic + HQLI rounds.

    With the default GRBG, RGGB, BGGR order each color of each pixel is
    re-estimated from its neighbours at least once.  Intermediate rounds are
    not clamped; the result is clamped to ``[0, 1]`` once at the end when
    `clamp` is set.
    """
    out = check_image(img, min_size=2)
    for p in patterns:
        out = demosaic_hqli(mosaic(out, p), alpha, beta, gamma)
    if clamp:
        np.clip(out, 0.0, 1.0, out=out)
    return out
