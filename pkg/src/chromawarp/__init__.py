"""Color image warping with cross-channel Laplacian detail.

Any separable interpolation kernel can be augmented with a small, fixed
linear correction that borrows high-frequency detail from the other two
color channels.  The package also provides weight training, a Bayer
re-mosaic/HQLI refinement pipeline, quality metrics and a benchmark harness.
"""

from .demosaic import CfaPattern, MosaicImage, demosaic_hqli, hqli_filters, mosaic, sequential_refine
from .estimators import ColorWarper, Downsampler, HQLIRefiner
from .geometry import (
    AffineMap, FracCoord, GeometricMap, HomographyMap, PointAtInfinityError, ScaleMap,
    SingularMapError, inverse_map, parse_matrix, target_extent,
)
from .image import BoundaryPolicy, ImageFormatError, load_image, quantize, save_image
from .kernels import KERNELS, InterpKernel, gather, get_kernel, kernel_weight, upsample_plane
from .laplacian import laplacian_at, laplacian_map
from .metrics import QualityReport, psnr, quality_report, ssim, time_op
from .resample import DownsampleMethod, DownsampleSpec, downsample, modcrop
from .training import DegenerateDataError, TrainSpec, collect_samples, fit_weights, train_weights
from .warp import (
    PUBLISHED_WEIGHTS, WarpConfig, WeightFileError, WeightSet, default_weights, warp,
    warp_correlated, warp_independent,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap", "BoundaryPolicy", "CfaPattern", "ColorWarper", "DegenerateDataError",
    "DownsampleMethod", "DownsampleSpec", "Downsampler", "FracCoord", "GeometricMap",
    "HQLIRefiner", "HomographyMap", "ImageFormatError", "InterpKernel", "KERNELS",
    "MosaicImage", "PUBLISHED_WEIGHTS", "PointAtInfinityError", "QualityReport", "ScaleMap",
    "SingularMapError", "TrainSpec", "WarpConfig", "WeightFileError", "WeightSet",
    "collect_samples", "default_weights", "demosaic_hqli", "downsample", "fit_weights",
    "gather", "get_kernel", "hqli_filters", "inverse_map", "kernel_weight", "laplacian_at",
    "laplacian_map", "load_image", "modcrop", "mosaic", "parse_matrix", "psnr", "quality_report",
    "quantize", "save_image", "sequential_refine", "ssim", "target_extent", "time_op",
    "train_weights", "upsample_plane", "warp", "warp_correlated", "warp_independent",
]
