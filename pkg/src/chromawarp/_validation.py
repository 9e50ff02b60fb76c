"""Input validation helpers shared by the estimators and the functional API."""

import numpy as np


def check_image(img, name="img", min_size=1, allow_gray=True, ensure_finite=True):
    """Validate and convert an image to a float64 ``(H, W, 3)`` array.

    Parameters
    ----------
    img : array-like
        ``(H, W, 3)`` color image or, if `allow_gray`, an ``(H, W)`` or
        ``(H, W, 1)`` grayscale image that is replicated to three planes.
    name : str
        Name used in error messages.
    min_size : int
        Minimum height and width.
    allow_gray : bool
        Accept single-plane input.
    ensure_finite : bool
        Reject NaN or infinite intensities.

    Returns
    -------
    np.ndarray
        C-contiguous float64 array of shape ``(H, W, 3)``.
    """
    arr = np.asarray(img)
    if arr.dtype.kind not in "biuf":
        raise TypeError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = arr.astype(np.float64, copy=False)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[:, :, 0]
    if arr.ndim == 2:
        if not allow_gray:
            raise ValueError(f"{name} must have 3 channels, got a single plane")
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    h, w = arr.shape[:2]
    if h < min_size or w < min_size:
        raise ValueError(f"{name} must be at least {min_size}x{min_size}, got {h}x{w}")
    if ensure_finite and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains NaN or infinite values")
    return np.ascontiguousarray(arr)


def check_plane(plane, name="plane"):
    """Validate a single channel plane as a float64 ``(H, W)`` array."""
    arr = np.asarray(plane, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty")
    return arr


def check_same_shape(a, b):
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def as_image_list(X):
    """Return ``(images, was_single)`` for an image or a sequence of images."""
    if isinstance(X, np.ndarray) and X.ndim in (2, 3) and X.dtype != object:
        return [X], True
    return list(X), False
