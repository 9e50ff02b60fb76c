"""Separable 1-D reconstruction kernels and fractional-coordinate sampling.

Every kernel is applied over a fixed per-axis footprint of ``taps`` samples
and its weights are renormalized to sum to 1 for each output sample, so
constants are reproduced exactly even at borders and under truncated
footprints.
"""

from dataclasses import dataclass
import functools

import numpy as np

from ._accel import cols_pass, rows_pass
from ._validation import check_plane
from .geometry import ScaleMap
from .image import BoundaryPolicy, resolve_index

KEYS_A = -0.5


def keys_cubic(t, a=KEYS_A):
    """Keys cubic convolution kernel."""
    t = np.abs(np.asarray(t, dtype=np.float64))
    t2 = t * t
    t3 = t2 * t
    inner = (a + 2.0) * t3 - (a + 3.0) * t2 + 1.0
    outer = a * t3 - 5.0 * a * t2 + 8.0 * a * t - 4.0 * a
    return np.where(t <= 1.0, inner, np.where(t < 2.0, outer, 0.0))


def lanczos(t, a):
    t = np.asarray(t, dtype=np.float64)
    w = np.where(np.abs(t) < a, np.sinc(t) * np.sinc(t / a), 0.0)
    # sinc(n) is not exactly zero in floating point
    integral = t == np.round(t)
    return np.where(integral, np.where(t == 0.0, 1.0, 0.0), w)


@dataclass(frozen=True)
class InterpKernel:
    """A separable interpolation kernel.

    Parameters
    ----------
    name : {'nearest', 'bilinear', 'bicubic', 'lanczos'}
        Kernel family.
    lobe_a : int
        Lanczos lobe count (ignored by the other families).
    taps : int
        Per-axis footprint.  Defaults to the full support of the family;
        a smaller value truncates the kernel to the nearest samples.
    """

    name: str
    lobe_a: int = 3
    taps: int = None

    def __post_init__(self):
        if self.name not in _FULL_TAPS:
            raise ValueError(f"unknown kernel {self.name!r}; expected one of {sorted(_FULL_TAPS)}")
        if self.taps is None:
            full = 2 * self.lobe_a if self.name == "lanczos" else _FULL_TAPS[self.name]
            object.__setattr__(self, "taps", full)
        if self.taps < 1:
            raise ValueError("taps must be >= 1")

    @property
    def support_radius(self):
        if self.name == "lanczos":
            return float(self.lobe_a)
        return {"nearest": 0.5, "bilinear": 1.0, "bicubic": 2.0}[self.name]

    @property
    def label(self):
        if self.name != "lanczos":
            return self.name
        if self.taps == 2 * self.lobe_a:
            return f"lanczos{self.lobe_a}"
        return f"lanczos{self.lobe_a}-{self.taps}tap"

    def weight(self, t):
        """Unnormalized kernel value at signed offset(s) `t`."""
        t = np.asarray(t, dtype=np.float64)
        if self.name == "nearest":
            # half-open interval so that ties go to the lower index
            return np.where((t > -0.5) & (t <= 0.5), 1.0, 0.0)
        if self.name == "bilinear":
            return np.maximum(0.0, 1.0 - np.abs(t))
        if self.name == "bicubic":
            return keys_cubic(t)
        return lanczos(t, self.lobe_a)

    def footprint(self, x):
        """Tap indices and renormalized weights for coordinates `x`.

        Returns
        -------
        idx : np.ndarray of int, shape ``x.shape + (taps,)``
            Unresolved (possibly out-of-range) sample indices.
        w : np.ndarray, same shape
            Weights summing to 1 along the last axis.
        """
        x = np.asarray(x, dtype=np.float64)
        half = self.taps // 2
        if self.taps % 2 == 0:
            base = np.floor(x) - (half - 1)
        else:
            base = np.floor(x + 0.5) - half
        idx = base[..., None] + np.arange(self.taps)
        w = self.weight(x[..., None] - idx)
        w /= w.sum(axis=-1, keepdims=True)
        return idx.astype(np.intp), w


_FULL_TAPS = {"nearest": 2, "bilinear": 2, "bicubic": 4, "lanczos": 6}

KERNELS = {
    "nearest": InterpKernel("nearest"),
    "bilinear": InterpKernel("bilinear"),
    "bicubic": InterpKernel("bicubic"),
    # 5x5 footprint: a=3 truncated to the five nearest taps
    "lanczos": InterpKernel("lanczos", lobe_a=3, taps=5),
    "lanczos2": InterpKernel("lanczos", lobe_a=2),
    "lanczos3": InterpKernel("lanczos", lobe_a=3),
}


def get_kernel(kernel):
    """Return an :class:`InterpKernel` from a name or pass one through."""
    if isinstance(kernel, InterpKernel):
        return kernel
    try:
        return KERNELS[str(kernel).lower()]
    except KeyError:
        raise ValueError(f"unknown kernel {kernel!r}; expected one of {sorted(KERNELS)}") from None


def kernel_weight(kernel, t):
    """Kernel value at signed offset `t` (scalar in, scalar out)."""
    w = get_kernel(kernel).weight(t)
    return float(w) if np.ndim(w) == 0 else w


def gather(img, x, y, kernel, policy=BoundaryPolicy.REPLICATE):
    """Interpolate every channel of `img` at fractional coordinates.

    Parameters
    ----------
    img : np.ndarray
        ``(H, W)`` or ``(H, W, C)`` array.
    x, y : array-like
        Row and column coordinates of equal shape.

    Returns
    -------
    np.ndarray
        Shape ``x.shape`` (2-D input) or ``x.shape + (C,)``.
    """
    kernel = get_kernel(kernel)
    arr = np.asarray(img, dtype=np.float64)
    flat = arr[:, :, None] if arr.ndim == 2 else arr
    h, w = flat.shape[:2]
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    ri, rw = kernel.footprint(x)
    ci, cw = kernel.footprint(y)
    ri = resolve_index(ri, h, policy)
    ci = resolve_index(ci, w, policy)
    out = np.zeros(x.shape + (flat.shape[2],), dtype=np.float64)
    for a in range(kernel.taps):
        row_part = np.zeros_like(out)
        for b in range(kernel.taps):
            row_part += cw[..., b, None] * flat[ri[..., a], ci[..., b]]
        out += rw[..., a, None] * row_part
    return out[..., 0] if arr.ndim == 2 else out


def sample_channel(plane, x, y, kernel, policy=BoundaryPolicy.REPLICATE):
    """Interpolate one channel plane at ``(x, y)``; scalars give a float."""
    plane = check_plane(plane)
    out = gather(plane, x, y, kernel, policy)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class AxisTaps:
    """Resolved source indices and weights for resampling along one axis."""

    idx: np.ndarray
    w: np.ndarray
    n_in: int

    @property
    def n_out(self):
        return self.idx.shape[0]

    def dense(self):
        """The equivalent ``(n_out, n_in)`` matrix, for inspection and tests."""
        mat = np.zeros((self.n_out, self.n_in))
        rows = np.repeat(np.arange(self.n_out), self.idx.shape[1])
        np.add.at(mat, (rows, self.idx.ravel()), self.w.ravel())
        return mat


def axis_taps(coords, n_in, kernel, policy=BoundaryPolicy.REPLICATE):
    """Tap table interpolating ``n_in`` samples at 1-D `coords`."""
    idx, w = get_kernel(kernel).footprint(coords)
    idx = resolve_index(idx, n_in, BoundaryPolicy.coerce(policy)).astype(np.int64)
    idx.setflags(write=False)
    w.setflags(write=False)
    return AxisTaps(idx, w, int(n_in))


@functools.lru_cache(maxsize=64)
def _scale_taps(n_in, n_out, scale, kernel, policy):
    coords = ScaleMap(scale).axis_coords(n_out, 0)
    return axis_taps(coords, n_in, kernel, policy)


def scale_taps(n_in, n_out, kernel, policy=BoundaryPolicy.REPLICATE, scale=None):
    """Tap table resampling ``n_in`` samples to ``n_out`` under a scale map.

    `scale` defaults to ``n_out / n_in``.
    """
    if scale is None:
        scale = n_out / n_in
    return _scale_taps(int(n_in), int(n_out), float(scale), get_kernel(kernel),
                       BoundaryPolicy.coerce(policy))


def apply_separable(img, row_taps, col_taps):
    """Resample along axis 1 with `col_taps`, then along axis 0 with `row_taps`.

    Works on ``(H, W)`` or ``(H, W, C)`` arrays.
    """
    arr = np.asarray(img, dtype=np.float64)
    planes = np.ascontiguousarray(arr[:, :, None] if arr.ndim == 2 else arr)
    if planes.shape[0] != row_taps.n_in or planes.shape[1] != col_taps.n_in:
        raise ValueError("tap tables do not match the image size")
    tmp = cols_pass(planes, col_taps.idx, col_taps.w)
    h, wo, c = tmp.shape
    out = rows_pass(tmp.reshape(h, wo * c), row_taps.idx, row_taps.w)
    out = out.reshape(row_taps.n_out, wo, c)
    return out[:, :, 0] if arr.ndim == 2 else out


def resize_scale(img, target_h, target_w, kernel, policy=BoundaryPolicy.REPLICATE,
                 geometric_map=None):
    """Resample `img` onto a ``target_h x target_w`` lattice under a scale map."""
    arr = np.asarray(img, dtype=np.float64)
    h, w = arr.shape[:2]
    m = geometric_map or ScaleMap.between((h, w), (target_h, target_w))
    rows = scale_taps(h, target_h, kernel, policy, m.s_row)
    cols = scale_taps(w, target_w, kernel, policy, m.s_col)
    return apply_separable(arr, rows, cols)


def upsample_plane(plane, target_h, target_w, kernel, policy=BoundaryPolicy.REPLICATE):
    """Resample a channel plane to ``target_h x target_w``.

    The per-axis scale is ``target / source`` with pixel-center alignment.
    """
    plane = check_plane(plane)
    if target_h < 1 or target_w < 1:
        raise ValueError("target dimensions must be >= 1")
    return resize_scale(plane, target_h, target_w, kernel, policy)
