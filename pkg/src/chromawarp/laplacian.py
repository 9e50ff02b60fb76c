"""Five-point cross Laplacian: center minus the mean of four axis neighbors.

The neighbors sit ``stride`` pixels away (2 by default, matching the
same-color spacing of a Bayer mosaic).  Border neighbors are resolved by the
boundary policy so that every pixel gets a value.
"""

import numpy as np

from ._accel import laplacian_3d
from .image import BoundaryPolicy, resolve_index

DEFAULT_STRIDE = 2


def _check_stride(stride):
    if int(stride) != stride or stride < 1:
        raise ValueError(f"stride must be a positive integer, got {stride}")
    return int(stride)


def laplacian_at(plane, m, n, stride=DEFAULT_STRIDE, policy=BoundaryPolicy.REPLICATE):
    """Laplacian of `plane` at pixel ``(m, n)``."""
    d = _check_stride(stride)
    plane = np.asarray(plane, dtype=np.float64)
    h, w = plane.shape[:2]

    def at(r, c):
        return plane[resolve_index(r, h, policy), resolve_index(c, w, policy)]

    nb = at(m + d, n) + at(m - d, n) + at(m, n - d) + at(m, n + d)
    v = at(m, n) - 0.25 * nb
    return float(v) if np.ndim(v) == 0 else v


def laplacian_map(img, stride=DEFAULT_STRIDE, policy=BoundaryPolicy.REPLICATE):
    """Laplacian at every pixel of an ``(H, W)`` plane or each plane of ``(H, W, C)``."""
    d = _check_stride(stride)
    arr = np.asarray(img, dtype=np.float64)
    planes = arr[:, :, None] if arr.ndim == 2 else arr
    out = laplacian_3d(np.ascontiguousarray(planes), *neighbor_indices(arr.shape, d, policy))
    return out[:, :, 0] if arr.ndim == 2 else out


def neighbor_indices(shape, stride, policy=BoundaryPolicy.REPLICATE):
    """Resolved up/down/left/right neighbor indices for a stencil of `stride`."""
    h, w = shape[:2]
    rows = np.arange(h)
    cols = np.arange(w)
    return (
        resolve_index(rows - stride, h, policy).astype(np.int64),
        resolve_index(rows + stride, h, policy).astype(np.int64),
        resolve_index(cols - stride, w, policy).astype(np.int64),
        resolve_index(cols + stride, w, policy).astype(np.int64),
    )
