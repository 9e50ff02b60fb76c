"""Downsampling pipelines that manufacture low-resolution inputs.

Two protocols are offered: plain nearest-neighbour decimation (aliasing is
expected) and bicubic resampling with the kernel widened by the shrink
factor, which low-pass filters while sampling as Matlab's ``imresize`` does.
Output dimensions are ``floor(M / S) x floor(N / S)``.
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from ._validation import check_image
from .geometry import pixel_center_coords
from .image import BoundaryPolicy, resolve_index
from .kernels import AxisTaps, apply_separable, keys_cubic


class DownsampleMethod(enum.Enum):
    NEAREST = "nearest"
    BICUBIC = "bicubic"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown downsample method {value!r}; expected 'nearest' or 'bicubic'") from None


@dataclass(frozen=True)
class DownsampleSpec:
    method: DownsampleMethod
    factor: float

    def __post_init__(self):
        object.__setattr__(self, "method", DownsampleMethod.coerce(self.method))
        if not (math.isfinite(self.factor) and self.factor > 1):
            raise ValueError(f"downsampling factor must be > 1, got {self.factor}")


def downsampled_shape(shape, factor):
    return int(math.floor(shape[0] / factor)), int(math.floor(shape[1] / factor))


def nearest_taps(n_in, n_out, factor):
    x = pixel_center_coords(n_out, 1.0 / factor)
    # round half down, matching the interpolation kernels' tie rule
    idx = np.clip(np.ceil(x - 0.5), 0, n_in - 1).astype(np.int64)
    return AxisTaps(idx[:, None], np.ones((n_out, 1)), n_in)


def antialias_taps(n_in, n_out, factor, policy=BoundaryPolicy.REPLICATE):
    """Keys cubic stretched by `factor`, renormalized per output sample."""
    x = pixel_center_coords(n_out, 1.0 / factor)
    taps = int(math.ceil(4 * factor)) + 2
    base = np.floor(x - 2 * factor) + 1
    idx = base[:, None] + np.arange(taps)
    w = keys_cubic((x[:, None] - idx) / factor) / factor
    w /= w.sum(axis=1, keepdims=True)
    idx = resolve_index(idx.astype(np.intp), n_in, policy).astype(np.int64)
    return AxisTaps(idx, w, n_in)


def downsample(img, spec, policy=BoundaryPolicy.REPLICATE):
    """Shrink `img` by ``spec.factor`` using ``spec.method``.

    Raises
    ------
    ValueError
        If the output would be empty.
    """
    img = check_image(img)
    h, w = img.shape[:2]
    ho, wo = downsampled_shape((h, w), spec.factor)
    if ho < 1 or wo < 1:
        raise ValueError(f"downsampling {h}x{w} by {spec.factor} leaves an empty image")
    if spec.method is DownsampleMethod.NEAREST:
        r = nearest_taps(h, ho, spec.factor).idx[:, 0]
        c = nearest_taps(w, wo, spec.factor).idx[:, 0]
        return np.ascontiguousarray(img[r][:, c])
    rows = antialias_taps(h, ho, spec.factor, policy)
    cols = antialias_taps(w, wo, spec.factor, policy)
    return apply_separable(img, rows, cols)


def modcrop(img, factor):
    """Crop to the largest size divisible by an integral `factor`.

    Non-integral factors leave the image untouched.
    """
    if float(factor) != int(factor):
        return img
    f = int(factor)
    h, w = img.shape[:2]
    return img[: h - h % f, : w - w % f]
