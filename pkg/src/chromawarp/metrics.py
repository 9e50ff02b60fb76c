"""PSNR, SSIM and wall-clock timing.

Both quality measures work on 8-bit values: images are quantized with the
same rule used when saving files, so scores describe what a viewer would
actually see.
"""

from dataclasses import dataclass
import math
import statistics
import time

import numpy as np

from ._validation import check_image, check_same_shape
from .image import quantize

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1, SSIM_K2 = 0.01, 0.03
PEAK = 255.0


@dataclass(frozen=True)
class QualityReport:
    psnr: float
    ssim: float
    elapsed: float


def luma(q):
    """BT.601 luma of an 8-bit RGB array, kept in the 0..255 range."""
    q = np.asarray(q, dtype=np.float64)
    return 0.299 * q[..., 0] + 0.587 * q[..., 1] + 0.114 * q[..., 2]


def ycbcr_y(q):
    """Y channel of studio-swing YCbCr (16..235) from 8-bit RGB."""
    q = np.asarray(q, dtype=np.float64) / 255.0
    return 16.0 + 65.481 * q[..., 0] + 128.553 * q[..., 1] + 24.966 * q[..., 2]


def psnr(a, b, crop=0, space="rgb"):
    """Peak signal-to-noise ratio in dB between two images in ``[0, 1]``.

    Parameters
    ----------
    crop : int
        Border pixels ignored on every side.
    space : {'rgb', 'y'}
        Joint MSE over the three RGB channels, or over the YCbCr Y channel.

    Returns
    -------
    float
        ``math.inf`` for identical quantized images.
    """
    a = check_image(a, "a", ensure_finite=False)
    b = check_image(b, "b", ensure_finite=False)
    check_same_shape(a, b)
    h, w = a.shape[:2]
    if crop < 0 or 2 * crop >= min(h, w):
        raise ValueError(f"crop {crop} too large for a {h}x{w} image")
    qa = quantize(a).astype(np.float64)
    qb = quantize(b).astype(np.float64)
    if crop:
        qa = qa[crop:-crop, crop:-crop]
        qb = qb[crop:-crop, crop:-crop]
    if space == "y":
        qa, qb = ycbcr_y(qa), ycbcr_y(qb)
    elif space != "rgb":
        raise ValueError(f"unknown PSNR space {space!r}; expected 'rgb' or 'y'")
    mse = np.mean((qa - qb) ** 2)
    if mse == 0:
        return math.inf
    return float(10.0 * np.log10(PEAK * PEAK / mse))


def gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    x = np.arange(size, dtype=np.float64) - (size - 1) / 2
    g = np.exp(-(x * x) / (2 * sigma * sigma))
    return g / g.sum()


def _filter_valid(x, g):
    n = len(g)
    h, w = x.shape
    tmp = np.zeros((h, w - n + 1))
    for k in range(n):
        tmp += g[k] * x[:, k:k + w - n + 1]
    out = np.zeros((h - n + 1, w - n + 1))
    for k in range(n):
        out += g[k] * tmp[k:k + h - n + 1]
    return out


def ssim_map(x, y, window=SSIM_WINDOW, sigma=SSIM_SIGMA):
    """SSIM at every fully-contained window position of two 2-D arrays (0..255)."""
    g = gaussian_window(window, sigma)
    c1 = (SSIM_K1 * PEAK) ** 2
    c2 = (SSIM_K2 * PEAK) ** 2
    mu_x = _filter_valid(x, g)
    mu_y = _filter_valid(y, g)
    sxx = _filter_valid(x * x, g) - mu_x * mu_x
    syy = _filter_valid(y * y, g) - mu_y * mu_y
    sxy = _filter_valid(x * y, g) - mu_x * mu_y
    num = (2 * mu_x * mu_y + c1) * (2 * sxy + c2)
    den = (mu_x * mu_x + mu_y * mu_y + c1) * (sxx + syy + c2)
    return num / den


def ssim(a, b):
    """Single-scale SSIM on the luma plane (11x11 Gaussian window, sigma 1.5).

    Raises
    ------
    ValueError
        On shape mismatch or images smaller than the window.
    """
    a = check_image(a, "a", ensure_finite=False)
    b = check_image(b, "b", ensure_finite=False)
    check_same_shape(a, b)
    if min(a.shape[:2]) < SSIM_WINDOW:
        raise ValueError(f"SSIM needs images of at least {SSIM_WINDOW}x{SSIM_WINDOW}")
    ya = luma(quantize(a))
    yb = luma(quantize(b))
    if np.array_equal(ya, yb):
        return 1.0
    return float(np.mean(ssim_map(ya, yb)))


def time_op(op, repeats=5, warmup=1):
    """Median wall-clock seconds of ``op()`` over `repeats` runs after `warmup` runs."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    for _ in range(warmup):
        op()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        op()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def quality_report(reference, estimate, elapsed=float("nan"), crop=0, space="rgb"):
    return QualityReport(psnr(reference, estimate, crop, space), ssim(reference, estimate), elapsed)
