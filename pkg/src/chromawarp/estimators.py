"""scikit-learn compatible estimators wrapping the warping pipelines.

``X`` is either one ``(H, W, 3)`` image or a sequence of images (sizes may
differ); ``transform`` returns the same kind it was given.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_image_list, check_image
from .demosaic import ALPHA, BETA, DEFAULT_SEQUENCE, GAMMA, CfaPattern, sequential_refine
from .geometry import GeometricMap, ScaleMap
from .image import BoundaryPolicy
from .kernels import get_kernel
from .laplacian import DEFAULT_STRIDE
from .metrics import psnr
from .resample import DownsampleSpec, downsample
from .training import TrainSpec, collect_samples, fit_weights
from .warp import WarpConfig, resolve_weights, warp


def _map_images(fn, X):
    imgs, single = as_image_list(X)
    out = [fn(check_image(img)) for img in imgs]
    return out[0] if single else out


class ColorWarper(TransformerMixin, BaseEstimator):
    """Backward warp of color images, optionally with cross-channel detail.

    Parameters
    ----------
    scale : float
        Upscaling factor used when `geometric_map` is None.
    kernel : str
        One of ``nearest``, ``bilinear``, ``bicubic``, ``lanczos``,
        ``lanczos2``, ``lanczos3``.
    mode : {'correlated', 'independent'}
    weights : 'published', 'zero', 'train', path or WeightSet
        Cross-channel gains.  ``'train'`` learns them in :meth:`fit`.
    geometric_map : GeometricMap, optional
        General forward map; requires `output_shape`.
    output_shape : (int, int), optional
        Target size; defaults to ``round(source * scale)``.
    laplacian_stride, boundary, clamp
        Passed through to the warp configuration.
    train_scale, sample_count, loss, random_state
        Training settings used when ``weights='train'``.

    Attributes
    ----------
    weights_ : WeightSet or None
    config_ : WarpConfig
    """

    def __init__(self, scale=2.0, kernel="bilinear", mode="correlated", weights="published",
                 geometric_map=None, output_shape=None, laplacian_stride=DEFAULT_STRIDE,
                 boundary="replicate", clamp=True, train_scale=4.0, sample_count=10000,
                 loss="mse", random_state=0):
        self.scale = scale
        self.kernel = kernel
        self.mode = mode
        self.weights = weights
        self.geometric_map = geometric_map
        self.output_shape = output_shape
        self.laplacian_stride = laplacian_stride
        self.boundary = boundary
        self.clamp = clamp
        self.train_scale = train_scale
        self.sample_count = sample_count
        self.loss = loss
        self.random_state = random_state

    def _train_spec(self):
        return TrainSpec(self.train_scale, self.kernel, self.sample_count, self.loss,
                         self.random_state, self.laplacian_stride, self.boundary)

    def fit(self, X=None, y=None):
        """Resolve (or, with ``weights='train'``, learn) the gains.

        For training, `X` holds ground-truth images; alternatively pass
        low-resolution sources as `X` and their ground truths as `y`.
        """
        if self.mode not in ("correlated", "independent"):
            raise ValueError(f"mode must be 'correlated' or 'independent', got {self.mode!r}")
        kernel = get_kernel(self.kernel)
        if self.geometric_map is None:
            geo = ScaleMap(self.scale)
        elif isinstance(self.geometric_map, GeometricMap):
            if self.output_shape is None and not isinstance(self.geometric_map, ScaleMap):
                raise ValueError("output_shape is required for non-scale maps")
            geo = self.geometric_map
        else:
            raise TypeError("geometric_map must be a GeometricMap")

        if self.mode == "independent":
            weights = None
        elif isinstance(self.weights, str) and self.weights == "train":
            if X is None:
                raise ValueError("weights='train' needs training images")
            if y is None:
                corpus, sources = as_image_list(X)[0], None
            else:
                corpus, sources = as_image_list(y)[0], as_image_list(X)[0]
            spec = self._train_spec()
            self.samples_ = collect_samples(corpus, spec, sources)
            weights = fit_weights(self.samples_, spec.loss)
        else:
            weights = resolve_weights(self.weights, kernel)
        self.weights_ = weights
        self.config_ = WarpConfig(kernel, geo, weights, self.laplacian_stride,
                                  BoundaryPolicy.coerce(self.boundary), self.clamp)
        return self

    def _target_shape(self, img):
        if self.output_shape is not None:
            return tuple(self.output_shape)
        return None, None

    def transform(self, X):
        check_is_fitted(self, "config_")

        def one(img):
            th, tw = self._target_shape(img)
            return warp(img, self.config_, th, tw, self.mode)

        return _map_images(one, X)

    def score(self, X, y):
        """Mean PSNR (dB) of ``transform(X)`` against ground truths `y`."""
        pred, _ = as_image_list(self.transform(X))
        truth, _ = as_image_list(y)
        return float(np.mean([psnr(t, p) for t, p in zip(truth, pred)]))


class HQLIRefiner(TransformerMixin, BaseEstimator):
    """Sequential Bayer re-mosaicking and HQLI demosaicking of full RGB images."""

    def __init__(self, patterns=tuple(p.value.lower() for p in DEFAULT_SEQUENCE),
                 alpha=ALPHA, beta=BETA, gamma=GAMMA, clamp=True):
        self.patterns = patterns
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        self.clamp = clamp

    def fit(self, X=None, y=None):
        self.patterns_ = tuple(CfaPattern.coerce(p) for p in self.patterns)
        if not self.patterns_:
            raise ValueError("at least one CFA pattern is required")
        return self

    def transform(self, X):
        check_is_fitted(self, "patterns_")
        return _map_images(
            lambda img: sequential_refine(img, self.patterns_, self.alpha, self.beta, self.gamma,
                                          self.clamp),
            X,
        )


class Downsampler(TransformerMixin, BaseEstimator):
    """Shrink images by `factor` with nearest-neighbour or antialiased bicubic sampling."""

    def __init__(self, factor=2.0, method="bicubic", boundary="replicate"):
        self.factor = factor
        self.method = method
        self.boundary = boundary

    def fit(self, X=None, y=None):
        self.spec_ = DownsampleSpec(self.method, float(self.factor))
        return self

    def transform(self, X):
        check_is_fitted(self, "spec_")
        return _map_images(lambda img: downsample(img, self.spec_, self.boundary), X)
