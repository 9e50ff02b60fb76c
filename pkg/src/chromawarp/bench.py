"""Dataset manifests and the experiment runners behind ``chromawarp bench``.

A manifest is a ``sha256sum``-style text file: one ``<hex digest>  <path>``
line per image, paths relative to the manifest's directory.  Digests are
verified before any experiment runs.
"""

from dataclasses import dataclass, field
import csv
import hashlib
import io
import math
import os
from pathlib import Path

import numpy as np

from .demosaic import sequential_refine
from .geometry import ScaleMap
from .image import load_image
from .kernels import get_kernel
from .laplacian import DEFAULT_STRIDE
from .metrics import psnr, ssim, time_op
from .reference import PUBLISHED_TABLE4
from .resample import DownsampleSpec, downsample, modcrop
from .warp import WarpConfig, resolve_weights, warp_correlated, warp_independent

DATA_DIR = Path(__file__).parent / "data"
BUILTIN_DATASETS = ("desk5", "holdout")
MANIFEST_NAME = "MANIFEST.sha256"
IMAGE_SUFFIXES = (".png", ".ppm", ".pnm", ".pgm")
CSV_HEADER = ("dataset", "kernel", "scale", "method", "psnr_db", "ssim", "time_s")

FETCH_INSTRUCTIONS = """\
Benchmark images are not redistributed with chromawarp.

Fetch the standard super-resolution test sets and place each one in its own
directory (PNG or binary PPM files, 8-bit RGB):

  Set5, Set14, BSD100, Urban100
      Widely mirrored with the super-resolution literature, e.g. the
      dataset links in https://github.com/jbhuang0604/SelfExSR
  BSD200 (training split of the Berkeley Segmentation Dataset)
      https://www2.eecs.berkeley.edu/Research/Projects/CS/vision/bsds/

Then write a manifest for each directory:

  chromawarp bench manifest /data/Set5          # writes /data/Set5/MANIFEST.sha256

and run the experiments, e.g.:

  chromawarp bench table3 --dataset /data/Set5 --out table3.csv
  chromawarp bench table4 --data-root /data --out table4.csv

Set CHROMAWARP_DATA=/data to let the acceptance tests find the datasets.
"""


class ManifestError(RuntimeError):
    """Raised for missing datasets, missing files or digest mismatches."""


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class DatasetManifest:
    name: str
    root: Path
    entries: list = field(default_factory=list)

    @classmethod
    def from_file(cls, path, name=None):
        path = Path(path)
        entries = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                digest, _, rel = line.partition(" ")
                rel = rel.strip().lstrip("*")
                if len(digest) != 64 or not rel:
                    raise ManifestError(f"{path}:{lineno}: expected '<sha256>  <path>'")
                entries.append((rel, digest.lower()))
        if not entries:
            raise ManifestError(f"{path}: manifest lists no images")
        return cls(name or path.parent.name, path.parent, entries)

    @classmethod
    def from_directory(cls, directory, name=None):
        directory = Path(directory)
        files = sorted(p for p in directory.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
        if not files:
            raise ManifestError(f"{directory}: no PNG/PPM images found")
        entries = [(p.name, sha256_file(p)) for p in files]
        return cls(name or directory.name, directory, entries)

    def write(self, path=None):
        path = Path(path) if path else self.root / MANIFEST_NAME
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for rel, digest in self.entries:
                fh.write(f"{digest}  {rel}\n")
        return path

    def paths(self):
        return [self.root / rel for rel, _ in self.entries]

    def verify(self):
        for rel, digest in self.entries:
            p = self.root / rel
            if not p.is_file():
                raise ManifestError(f"{self.name}: missing file {p}")
            actual = sha256_file(p)
            if actual != digest:
                raise ManifestError(f"{self.name}: digest mismatch for {p} ({actual} != {digest})")

    def load_images(self, verify=True):
        if verify:
            self.verify()
        return [load_image(p) for p in self.paths()]

    def digest(self):
        """Digest of the whole manifest (stable identifier of the corpus)."""
        h = hashlib.sha256()
        for rel, digest in self.entries:
            h.update(f"{digest}  {rel}\n".encode())
        return h.hexdigest()


def builtin_manifest(name="desk5"):
    if name not in BUILTIN_DATASETS:
        raise ManifestError(f"unknown built-in dataset {name!r}")
    return DatasetManifest.from_file(DATA_DIR / name / MANIFEST_NAME, name)


def resolve_dataset(name, data_root=None):
    """Find a dataset by built-in name, manifest file, directory, or name under `data_root`."""
    if name in BUILTIN_DATASETS:
        return builtin_manifest(name)
    candidates = [Path(name)]
    root = data_root or os.environ.get("CHROMAWARP_DATA")
    if root:
        candidates.append(Path(root) / name)
    for p in candidates:
        if p.is_file():
            return DatasetManifest.from_file(p)
        if p.is_dir():
            if (p / MANIFEST_NAME).is_file():
                return DatasetManifest.from_file(p / MANIFEST_NAME, p.name)
            return DatasetManifest.from_directory(p)
    raise ManifestError(f"dataset {name!r} not found.\n\n{FETCH_INSTRUCTIONS}")


@dataclass(frozen=True)
class ExperimentSpec:
    experiment: str = "table3"
    dataset: str = "desk5"
    scales: tuple = (2, 3, 4)
    kernels: tuple = ("bilinear", "bicubic", "lanczos")
    weights_source: str = "published"
    laplacian_stride: int = DEFAULT_STRIDE
    crop: int = 0
    psnr_space: str = "rgb"
    down: str = "bicubic"
    repeats: int = 5
    timing: bool = True


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    kernel: str
    scale: float
    method: str
    psnr: float
    ssim: float
    time: float

    def cells(self):
        def num(v):
            return "inf" if math.isinf(v) else f"{v:.4f}"
        scale = f"{self.scale:g}"
        return [self.dataset, self.kernel, scale, self.method,
                num(self.psnr), num(self.ssim), num(self.time)]


def _lowres(gt, scale, down):
    gt = np.ascontiguousarray(modcrop(gt, scale))
    return gt, downsample(gt, DownsampleSpec(down, float(scale)))


def _measure(gt, fn, spec):
    out = fn()
    elapsed = time_op(fn, repeats=spec.repeats) if spec.timing else 0.0
    return psnr(gt, out, spec.crop, spec.psnr_space), ssim(gt, out), elapsed


def _average(name, kernel, scale, method, values):
    arr = np.array(values, dtype=np.float64)
    return ResultRow(name, kernel, scale, method,
                     float(np.mean(arr[:, 0])), float(np.mean(arr[:, 1])), float(np.mean(arr[:, 2])))


def run_table1(manifest, spec=None, images=None):
    """Nearest-neighbour downsampling, upsampling, then sequential HQLI refinement.

    Emits ``independent`` (before) and ``refine`` (after) rows per kernel
    and scale (the scale defaults to 2).
    """
    spec = spec or ExperimentSpec("table1", manifest.name, (2,), ("bilinear", "bicubic"), down="nearest")
    images = manifest.load_images() if images is None else images
    rows = []
    for scale in spec.scales:
        for kname in spec.kernels:
            before, after = [], []
            for gt in images:
                gt, lr = _lowres(gt, scale, spec.down)
                cfg = WarpConfig(get_kernel(kname), ScaleMap.between(lr.shape, gt.shape))
                shape = gt.shape[:2]
                before.append(_measure(gt, lambda: warp_independent(lr, cfg, *shape), spec))
                after.append(_measure(
                    gt, lambda: sequential_refine(warp_independent(lr, cfg, *shape)), spec))
            rows.append(_average(manifest.name, kname, scale, "independent", before))
            rows.append(_average(manifest.name, kname, scale, "refine", after))
    return rows


def run_table3(manifest, spec=None, images=None):
    """Independent and correlated warps per kernel and scale on one dataset."""
    spec = spec or ExperimentSpec("table3", manifest.name)
    images = manifest.load_images() if images is None else images
    rows = []
    for kname in spec.kernels:
        kernel = get_kernel(kname)
        weights = resolve_weights(spec.weights_source, kernel)
        for scale in spec.scales:
            ind, cor = [], []
            for gt in images:
                gt, lr = _lowres(gt, scale, spec.down)
                cfg = WarpConfig(kernel, ScaleMap.between(lr.shape, gt.shape), weights,
                                 spec.laplacian_stride)
                shape = gt.shape[:2]
                ind.append(_measure(gt, lambda: warp_independent(lr, cfg, *shape), spec))
                cor.append(_measure(gt, lambda: warp_correlated(lr, cfg, *shape), spec))
            rows.append(_average(manifest.name, kname, scale, "independent", ind))
            rows.append(_average(manifest.name, kname, scale, "correlated", cor))
    return rows


def run_table4_ours(manifests, spec=None):
    """Correlated Lanczos warps over several datasets."""
    spec = spec or ExperimentSpec("table4", ",".join(m.name for m in manifests), kernels=("lanczos",))
    rows = []
    for manifest in manifests:
        images = manifest.load_images()
        for kname in spec.kernels:
            kernel = get_kernel(kname)
            weights = resolve_weights(spec.weights_source, kernel)
            for scale in spec.scales:
                vals = []
                for gt in images:
                    gt, lr = _lowres(gt, scale, spec.down)
                    cfg = WarpConfig(kernel, ScaleMap.between(lr.shape, gt.shape), weights,
                                     spec.laplacian_stride)
                    shape = gt.shape[:2]
                    vals.append(_measure(gt, lambda: warp_correlated(lr, cfg, *shape), spec))
                rows.append(_average(manifest.name, kname, scale, "correlated", vals))
    return rows


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.cells())
    return buf.getvalue()


def write_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            ResultRow(r["dataset"], r["kernel"], float(r["scale"]), r["method"],
                      float(r["psnr_db"]), float(r["ssim"]), float(r["time_s"]))
            for r in reader
        ]


def write_metadata(path, items):
    """Plain ``key value`` lines; values must not contain newlines."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in items.items():
            fh.write(f"{key} {value}\n")


def experiment_metadata(spec, manifests):
    meta = {
        "experiment": spec.experiment,
        "datasets": ",".join(m.name for m in manifests),
        "manifest_sha256": ",".join(m.digest() for m in manifests),
        "scales": ",".join(f"{s:g}" for s in spec.scales),
        "kernels": ",".join(spec.kernels),
        "weights": spec.weights_source,
        "laplacian_stride": spec.laplacian_stride,
        "downsample": spec.down,
        "crop": spec.crop,
        "psnr_space": spec.psnr_space,
        "timing_repeats": spec.repeats,
    }
    if spec.experiment == "table1":
        meta["table1_scale_assumed"] = "2 (scale not stated for this experiment; override with --scale)"
    if spec.experiment == "table4":
        for (ds, s), cols in sorted(PUBLISHED_TABLE4.items()):
            psnr_gr, time_gr = cols["GR"]
            meta[f"reference_GR_{ds}_x{s}"] = f"psnr_db={psnr_gr:.2f} time_s={time_gr:.2f}"
    return meta
