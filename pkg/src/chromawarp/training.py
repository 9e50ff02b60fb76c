"""Learning the six cross-channel gains by regression.

Ground-truth images are downsampled to make low-resolution sources; at
randomly drawn target pixels the residual between the ground truth and the
intra-channel estimate is regressed on the interpolated Laplacians of the
two other channels.  Each output channel is an independent two-unknown
least-squares problem.
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from ._validation import check_image
from .geometry import ScaleMap
from .image import BoundaryPolicy
from .kernels import InterpKernel, gather, get_kernel
from .laplacian import DEFAULT_STRIDE, laplacian_map
from .resample import DownsampleMethod, DownsampleSpec, downsample, modcrop
from .warp import WeightSet

logger = logging.getLogger(__name__)

IRLS_EPS = 1e-8
IRLS_TOL = 1e-10
IRLS_MAX_ITER = 20000

# (name, target channel, (first, second) Laplacian channels, weight names)
SYSTEMS = (
    ("green", 1, (0, 2), ("w_gr", "w_gb")),
    ("red", 0, (1, 2), ("w_rg", "w_rb")),
    ("blue", 2, (1, 0), ("w_bg", "w_br")),
)


class DegenerateDataError(ValueError):
    """Raised when a regression system does not determine its weights."""


@dataclass(frozen=True)
class TrainSpec:
    scale: float = 4.0
    kernel: InterpKernel = "bilinear"
    sample_count: int = 10000
    loss: str = "mse"
    seed: int = 0
    laplacian_stride: int = DEFAULT_STRIDE
    boundary: BoundaryPolicy = BoundaryPolicy.REPLICATE

    def __post_init__(self):
        object.__setattr__(self, "kernel", get_kernel(self.kernel))
        object.__setattr__(self, "boundary", BoundaryPolicy.coerce(self.boundary))
        if not self.scale > 1:
            raise ValueError(f"training scale must be > 1, got {self.scale}")
        if self.sample_count < 12:
            raise ValueError(f"sample_count must be >= 12, got {self.sample_count}")
        if self.loss not in ("mse", "mae"):
            raise ValueError(f"loss must be 'mse' or 'mae', got {self.loss!r}")

    @property
    def border(self):
        """Target-lattice margin excluded from sampling."""
        return int(math.ceil(max(2 * self.laplacian_stride, self.kernel.support_radius)))


@dataclass(frozen=True)
class TrainingSample:
    residual_r: float
    residual_g: float
    residual_b: float
    lap_r: float
    lap_g: float
    lap_b: float


@dataclass(frozen=True, eq=False)
class TrainingSamples:
    """Column-stored samples; ``residual`` and ``lap`` are ``(K, 3)`` in RGB order."""

    residual: np.ndarray
    lap: np.ndarray
    image_index: np.ndarray
    target_ij: np.ndarray

    def __len__(self):
        return len(self.residual)

    def __getitem__(self, k):
        r, l = self.residual[k], self.lap[k]
        return TrainingSample(*map(float, r), *map(float, l))

    def scaled(self, c):
        return TrainingSamples(self.residual * c, self.lap * c, self.image_index, self.target_ij)


def _pairs(corpus, spec, sources):
    if sources is not None and len(sources) != len(corpus):
        raise ValueError("sources and corpus must have the same length")
    min_side = 2 * spec.scale
    for k, gt in enumerate(corpus):
        gt = check_image(gt, f"corpus[{k}]")
        if min(gt.shape[:2]) < min_side:
            logger.warning("skipping corpus[%d]: %dx%d is smaller than %gx%g",
                           k, gt.shape[0], gt.shape[1], min_side, min_side)
            continue
        if sources is None:
            gt = np.ascontiguousarray(modcrop(gt, spec.scale))
            lr = downsample(gt, DownsampleSpec(DownsampleMethod.BICUBIC, spec.scale), spec.boundary)
        else:
            lr = check_image(sources[k], f"sources[{k}]")
        yield k, gt, lr


def collect_samples(corpus, spec, sources=None):
    """Draw ``spec.sample_count`` regression samples across the whole corpus.

    Parameters
    ----------
    corpus : sequence of images
        Ground-truth (target) images.
    spec : TrainSpec
    sources : sequence of images, optional
        Matching low-resolution inputs.  When omitted each ground truth is
        bicubic-downsampled by ``spec.scale``.

    Returns
    -------
    TrainingSamples
        Ordered by image index, then by draw order.
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("training corpus is empty")
    pairs = list(_pairs(corpus, spec, sources))
    if not pairs:
        raise ValueError("every corpus image was too small for the training scale")

    b = spec.border
    counts = []
    for _, gt, _ in pairs:
        h, w = gt.shape[:2]
        counts.append(max(h - 2 * b, 0) * max(w - 2 * b, 0))
    total = int(sum(counts))
    if total < spec.sample_count:
        raise ValueError(f"corpus offers {total} eligible pixels, fewer than sample_count={spec.sample_count}")

    rng = np.random.default_rng(spec.seed)
    draws = rng.choice(total, size=spec.sample_count, replace=False)
    offsets = np.cumsum([0] + counts)
    owner = np.searchsorted(offsets, draws, side="right") - 1
    order = np.argsort(owner, kind="stable")

    res_parts, lap_parts, idx_parts, ij_parts = [], [], [], []
    for p, (k, gt, lr) in enumerate(pairs):
        sel = draws[order][owner[order] == p] - offsets[p]
        if sel.size == 0:
            continue
        inner_w = gt.shape[1] - 2 * b
        i = sel // inner_w + b
        j = sel % inner_w + b
        geo = ScaleMap.between(lr.shape, gt.shape)
        x, y, _ = geo.inverse(i, j)
        est = gather(lr, x, y, spec.kernel, spec.boundary)
        lap = gather(laplacian_map(lr, spec.laplacian_stride, spec.boundary), x, y,
                     spec.kernel, spec.boundary)
        res_parts.append(gt[i, j] - est)
        lap_parts.append(lap)
        idx_parts.append(np.full(sel.size, k))
        ij_parts.append(np.stack([i, j], axis=1))
    return TrainingSamples(
        np.concatenate(res_parts), np.concatenate(lap_parts),
        np.concatenate(idx_parts), np.concatenate(ij_parts),
    )


def _solve_mse(a, y):
    return np.linalg.solve(a.T @ a, a.T @ y)


def _solve_mae(a, y):
    coef = _solve_mse(a, y)
    for _ in range(IRLS_MAX_ITER):
        r = np.abs(y - a @ coef)
        wts = 1.0 / np.maximum(r, IRLS_EPS)
        aw = a * wts[:, None]
        new = np.linalg.solve(aw.T @ a, aw.T @ y)
        if np.max(np.abs(new - coef)) < IRLS_TOL:
            return new
        coef = new
    logger.warning("IRLS stopped after %d iterations without reaching %g", IRLS_MAX_ITER, IRLS_TOL)
    return coef


def fit_weights(samples, loss="mse"):
    """Solve the three per-channel regressions for a :class:`WeightSet`.

    ``loss='mse'`` uses the normal equations; ``loss='mae'`` runs
    iteratively reweighted least squares to convergence.

    Raises
    ------
    DegenerateDataError
        If a system's two Laplacian columns are rank deficient.
    """
    if loss not in ("mse", "mae"):
        raise ValueError(f"loss must be 'mse' or 'mae', got {loss!r}")
    solve = _solve_mse if loss == "mse" else _solve_mae
    out = {}
    for name, target, cols, names in SYSTEMS:
        a = samples.lap[:, list(cols)]
        y = samples.residual[:, target]
        if len(a) < 2 or np.linalg.matrix_rank(a) < 2:
            raise DegenerateDataError(
                f"the {name} system is rank deficient (Laplacians of "
                f"{'RGB'[cols[0]]} and {'RGB'[cols[1]]} do not span two dimensions)"
            )
        coef = solve(a, y)
        out[names[0]], out[names[1]] = float(coef[0]), float(coef[1])
    return WeightSet(**out)


def train_weights(corpus, spec=None, sources=None):
    spec = spec or TrainSpec()
    return fit_weights(collect_samples(corpus, spec, sources), spec.loss)
