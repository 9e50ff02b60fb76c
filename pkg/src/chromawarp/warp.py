"""Backward-mapped color warping, per channel or with cross-channel detail.

The correlated mode adds weighted Laplacians of the two other channels to
each channel's own interpolated estimate::

    G2 = G~ + w_gr * dR + w_gb * dB
    R2 = R~ + w_rg * dG + w_rb * dB
    B2 = B~ + w_bg * dG + w_br * dR

The Laplacians are computed on the source lattice and interpolated with the
same kernel as the intensities.  Because interpolation is linear, the
weighted sum can equally be formed on the source lattice before a single
resampling pass; that fused route is the default and the two-pass route is
kept for verification (``fused=False``).
"""

from dataclasses import dataclass, fields, replace
import math
import os

import numpy as np

from ._accel import cross_detail_3d
from ._validation import check_image
from .geometry import GeometricMap, ScaleMap, target_extent
from .image import BoundaryPolicy
from .kernels import InterpKernel, gather, get_kernel, resize_scale
from .laplacian import DEFAULT_STRIDE, laplacian_map, neighbor_indices

WEIGHT_NAMES = ("w_gr", "w_gb", "w_rg", "w_rb", "w_bg", "w_br")


class WeightFileError(ValueError):
    """Raised for malformed weight files."""


@dataclass(frozen=True)
class WeightSet:
    """The six cross-channel gains; ``w_xy`` scales the Laplacian of y added to x."""

    w_gr: float = 0.0
    w_gb: float = 0.0
    w_rg: float = 0.0
    w_rb: float = 0.0
    w_bg: float = 0.0
    w_br: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v}")
            if abs(v) >= 1.0:
                raise ValueError(f"{f.name} = {v} is outside the sanity bound |w| < 1")
            object.__setattr__(self, f.name, v)

    @classmethod
    def zeros(cls):
        return cls()

    def as_dict(self):
        return {name: getattr(self, name) for name in WEIGHT_NAMES}

    def as_tuple(self):
        return tuple(getattr(self, name) for name in WEIGHT_NAMES)

    def is_zero(self):
        return all(v == 0.0 for v in self.as_tuple())

    def to_file(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for name in WEIGHT_NAMES:
                fh.write(f"{name} {getattr(self, name)!r}\n")

    @classmethod
    def from_file(cls, path):
        """Read the plain-text ``name value`` format (one gain per line)."""
        vals = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                parts = line.split()
                if not parts:
                    continue
                if len(parts) != 2:
                    raise WeightFileError(f"{path}:{lineno}: expected 'name value', got {line.strip()!r}")
                name, raw = parts
                if name not in WEIGHT_NAMES:
                    raise WeightFileError(f"{path}:{lineno}: unknown weight name {name!r}")
                if name in vals:
                    raise WeightFileError(f"{path}:{lineno}: duplicate weight {name!r}")
                try:
                    vals[name] = float(raw)
                except ValueError:
                    raise WeightFileError(f"{path}:{lineno}: bad value {raw!r}") from None
        missing = [n for n in WEIGHT_NAMES if n not in vals]
        if missing:
            raise WeightFileError(f"{path}: missing weights {missing}")
        try:
            return cls(**vals)
        except ValueError as exc:
            raise WeightFileError(f"{path}: {exc}") from None


# Published gains trained at S=4, keyed by kernel family.
PUBLISHED_WEIGHTS = {
    "bilinear": WeightSet(0.094, 0.119, 0.195, 0.008, 0.180, -0.003),
    "bicubic": WeightSet(0.045, 0.064, 0.096, 0.010, 0.089, 0.003),
    "lanczos": WeightSet(0.032, 0.041, 0.058, 0.015, 0.054, 0.008),
}


def default_weights(kernel):
    """Built-in gains for `kernel`'s family."""
    family = get_kernel(kernel).name
    try:
        return PUBLISHED_WEIGHTS[family]
    except KeyError:
        raise ValueError(
            f"no built-in weights for the {family} kernel; train them or load a file"
        ) from None


def resolve_weights(weights, kernel):
    """Accept a WeightSet, a file path, ``'published'`` or ``'zero'``."""
    if isinstance(weights, WeightSet):
        return weights
    if weights is None or weights == "published":
        return default_weights(kernel)
    if weights == "zero":
        return WeightSet.zeros()
    if isinstance(weights, (str, os.PathLike)):
        return WeightSet.from_file(weights)
    if isinstance(weights, dict):
        return WeightSet(**weights)
    raise TypeError(f"cannot interpret weights {weights!r}")


@dataclass(frozen=True)
class WarpConfig:
    """Everything a warp call needs besides the image and target size."""

    kernel: InterpKernel
    map: GeometricMap
    weights: WeightSet = None
    laplacian_stride: int = DEFAULT_STRIDE
    boundary: BoundaryPolicy = BoundaryPolicy.REPLICATE
    clamp_output: bool = True
    fused: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kernel", get_kernel(self.kernel))
        object.__setattr__(self, "boundary", BoundaryPolicy.coerce(self.boundary))
        if not isinstance(self.map, GeometricMap):
            raise TypeError("map must be a GeometricMap")

    def with_weights(self, weights):
        return replace(self, weights=weights)


def _target_dims(img, cfg, target_h, target_w):
    if target_h is None or target_w is None:
        th, tw = target_extent(cfg.map, img.shape[0], img.shape[1])
        target_h = th if target_h is None else target_h
        target_w = tw if target_w is None else target_w
    if target_h < 1 or target_w < 1:
        raise ValueError("target dimensions must be >= 1")
    return int(target_h), int(target_w)


def _snap(v, tol=1e-9):
    r = np.round(v)
    return np.where(np.abs(v - r) < tol, r, v)


def resample(arr, cfg, target_h, target_w):
    """Interpolate every plane of `arr` at ``H^-1`` of each target pixel.

    Target pixels whose inverse is a point at infinity are set to 0.
    """
    if isinstance(cfg.map, ScaleMap):
        return resize_scale(arr, target_h, target_w, cfg.kernel, cfg.boundary, cfg.map)
    x, y, valid = cfg.map.inverse_grid(target_h, target_w)
    x = _snap(np.where(valid, x, 0.0))
    y = _snap(np.where(valid, y, 0.0))
    out = gather(arr, x, y, cfg.kernel, cfg.boundary)
    if not valid.all():
        out[~valid] = 0.0
    return out


def _finish(out, cfg):
    if cfg.clamp_output:
        np.clip(out, 0.0, 1.0, out=out)
    return out


def warp_independent(img, cfg, target_h=None, target_w=None):
    """Warp each channel on its own with ``cfg.kernel`` under ``cfg.map``."""
    img = check_image(img)
    th, tw = _target_dims(img, cfg, target_h, target_w)
    return _finish(resample(img, cfg, th, tw), cfg)


def _mix(base, lap, w):
    r, g, b = base[..., 0], base[..., 1], base[..., 2]
    lr, lg, lb = lap[..., 0], lap[..., 1], lap[..., 2]
    out = np.empty_like(base)
    out[..., 0] = r + w.w_rg * lg + w.w_rb * lb
    out[..., 1] = g + w.w_gr * lr + w.w_gb * lb
    out[..., 2] = b + w.w_bg * lg + w.w_br * lr
    return out


def cross_detail(img, weights, stride=DEFAULT_STRIDE, policy=BoundaryPolicy.REPLICATE):
    """Source-lattice image with the weighted cross-channel Laplacians added."""
    w = weights
    nb = neighbor_indices(img.shape, stride, policy)
    return cross_detail_3d(np.ascontiguousarray(img, dtype=np.float64), *nb,
                           w.w_rg, w.w_rb, w.w_gr, w.w_gb, w.w_bg, w.w_br)


def warp_correlated(img, cfg, target_h=None, target_w=None):
    """Warp with cross-channel Laplacian detail added to every channel.

    Raises
    ------
    ValueError
        If ``cfg.weights`` is missing.
    """
    if cfg.weights is None:
        raise ValueError("correlated warping requires cfg.weights")
    img = check_image(img)
    th, tw = _target_dims(img, cfg, target_h, target_w)
    if cfg.fused:
        out = resample(cross_detail(img, cfg.weights, cfg.laplacian_stride, cfg.boundary), cfg, th, tw)
    else:
        lap = laplacian_map(img, cfg.laplacian_stride, cfg.boundary)
        both = resample(np.concatenate([img, lap], axis=2), cfg, th, tw)
        out = _mix(both[..., :3], both[..., 3:], cfg.weights)
    return _finish(out, cfg)


def warp(img, cfg, target_h=None, target_w=None, mode="correlated"):
    if mode == "independent":
        return warp_independent(img, cfg, target_h, target_w)
    if mode == "correlated":
        return warp_correlated(img, cfg, target_h, target_w)
    raise ValueError(f"unknown mode {mode!r}; expected 'independent' or 'correlated'")
