"""Command-line entry point: ``chromawarp <verb> ...``.

Exit status is 0 on success, 1 on runtime or data errors and 2 on invalid
flags.  Every error line starts with a code (``ERR_IO``, ``ERR_FORMAT``,
``ERR_FLAGS``, ``ERR_DEGENERATE``) so scripts can grep for it.
"""

import argparse
import hashlib
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import bench
from .demosaic import DEFAULT_SEQUENCE, CfaPattern, sequential_refine
from .geometry import ScaleMap, SingularMapError, parse_matrix
from .image import ImageFormatError, load_image, save_image
from .kernels import KERNELS
from .laplacian import DEFAULT_STRIDE
from .training import DegenerateDataError, TrainSpec, collect_samples, fit_weights
from .warp import WarpConfig, WeightFileError, resolve_weights, warp

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2
CORPUS_SUFFIXES = bench.IMAGE_SUFFIXES + (".npy",)


class CliError(Exception):
    def __init__(self, code, message, status=EXIT_RUNTIME):
        super().__init__(message)
        self.code = code
        self.status = status


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"ERR_FLAGS {self.prog}: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _flag_error(message):
    return CliError("ERR_FLAGS", message, EXIT_USAGE)


def _positive(kind):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {kind.__name__} value {text!r}") from None
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
        return v
    return parse


def _dims(text):
    try:
        h, w = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HxW, got {text!r}") from None
    if h < 1 or w < 1:
        raise argparse.ArgumentTypeError(f"dimensions must be >= 1, got {text}")
    return h, w


def _csv_list(kind):
    def parse(text):
        try:
            return tuple(kind(v) for v in text.split(",") if v)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    return parse


def _set_threads(n):
    if n is None:
        return
    from threadpoolctl import threadpool_limits

    # the compiled kernels are single-threaded; this caps BLAS/OpenMP pools
    threadpool_limits(n)


def _read(path):
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise CliError("ERR_IO", f"cannot read {path}: no such file")
    return load_image(path)


def _write(img, path):
    save_image(img, path)


def _warp_config(args, geo):
    weights = None
    if args.mode == "correlated":
        if args.weights is None and args.kernel == "nearest":
            raise _flag_error("the nearest kernel has no built-in weights; pass --weights")
        weights = resolve_weights(args.weights or "published", args.kernel)
    return WarpConfig(args.kernel, geo, weights, args.stride)


def cmd_upscale(args):
    """Resize by a (possibly fractional) scale factor."""
    if args.mode == "independent" and args.weights is not None:
        raise _flag_error("--weights is only meaningful with --mode correlated")
    img = _read(args.input)
    cfg = _warp_config(args, ScaleMap(args.scale))
    t0 = time.perf_counter()
    out = warp(img, cfg, mode=args.mode)
    elapsed = time.perf_counter() - t0
    _write(out, args.output)
    h, w = img.shape[:2]
    th, tw = out.shape[:2]
    print(f"{h}x{w} -> {th}x{tw} elapsed {elapsed:.4f} s")
    return EXIT_OK


def cmd_warp(args):
    """General affine or perspective backward warp."""
    if args.mode == "independent" and args.weights is not None:
        raise _flag_error("--weights is only meaningful with --mode correlated")
    kind, text = ("affine", args.affine) if args.affine is not None else ("homography", args.homography)
    try:
        geo = parse_matrix(text, kind)
    except SingularMapError as exc:
        raise CliError("ERR_DEGENERATE", str(exc)) from None
    except ValueError as exc:
        raise _flag_error(str(exc)) from None
    img = _read(args.input)
    th, tw = args.size or img.shape[:2]
    cfg = _warp_config(args, geo)
    out = warp(img, cfg, th, tw, args.mode)
    _, _, valid = geo.inverse_grid(th, tw)
    bad = int(np.size(valid) - np.count_nonzero(valid))
    if bad:
        print(f"warning: {bad} target pixels map to a point at infinity; filled with 0",
              file=sys.stderr)
    _write(out, args.output)
    print(f"{img.shape[0]}x{img.shape[1]} -> {th}x{tw}")
    return EXIT_OK


def cmd_demosaic_refine(args):
    """Sequential Bayer re-mosaic / HQLI demosaic refinement of an RGB image."""
    img = _read(args.input)
    out = sequential_refine(img, args.patterns)
    _write(out, args.output)
    print(f"refined {img.shape[0]}x{img.shape[1]} with {','.join(p.value for p in args.patterns)}")
    return EXIT_OK


def _corpus_files(directory):
    directory = Path(directory)
    if not directory.is_dir():
        raise CliError("ERR_IO", f"corpus directory {directory} does not exist")
    files = sorted(p for p in directory.iterdir() if p.suffix.lower() in CORPUS_SUFFIXES)
    if not files:
        raise CliError("ERR_IO", f"corpus directory {directory} has no images")
    return files


def _load_corpus_file(path):
    if path.suffix.lower() == ".npy":
        try:
            arr = np.load(path, allow_pickle=False)
        except ValueError as exc:
            raise ImageFormatError(f"{path}: {exc}") from None
        return np.asarray(arr, dtype=np.float64)
    return load_image(path)


def _corpus_hash(files):
    h = hashlib.sha256()
    for p in files:
        h.update(f"{bench.sha256_file(p)}  {p.name}\n".encode())
    return h.hexdigest()


def cmd_train(args):
    """Fit the six cross-channel gains on a ground-truth corpus."""
    try:
        spec = TrainSpec(args.scale, args.kernel, args.samples, args.loss, args.seed, args.stride)
    except ValueError as exc:
        raise _flag_error(str(exc)) from None
    files = _corpus_files(args.corpus)
    corpus = [_load_corpus_file(p) for p in files]
    sources = None
    if args.lowres_dir is not None:
        lr_files = _corpus_files(args.lowres_dir)
        if [p.stem for p in lr_files] != [p.stem for p in files]:
            raise CliError("ERR_IO", "--lowres-dir file names do not match the corpus")
        sources = [_load_corpus_file(p) for p in lr_files]
    weights = fit_weights(collect_samples(corpus, spec, sources), spec.loss)
    weights.to_file(args.output)
    meta = {
        "corpus_sha256": _corpus_hash(files),
        "corpus_images": len(files),
        "lowres_sha256": _corpus_hash(_corpus_files(args.lowres_dir)) if sources else "none",
        "scale": f"{spec.scale:g}",
        "kernel": spec.kernel.label,
        "sample_count": spec.sample_count,
        "loss": spec.loss,
        "seed": spec.seed,
        "laplacian_stride": spec.laplacian_stride,
        "border": spec.border,
    }
    bench.write_metadata(f"{args.output}.meta", meta)
    for name, value in weights.as_dict().items():
        print(f"{name} {value:+.6f}")
    return EXIT_OK


def _experiment(args, name, kernels, scales, down):
    return bench.ExperimentSpec(
        experiment=name,
        dataset=",".join(args.dataset),
        scales=tuple(args.scale or scales),
        kernels=tuple(args.kernels or kernels),
        weights_source=args.weights or "published",
        laplacian_stride=args.stride,
        crop=args.crop,
        psnr_space=args.psnr_space,
        down=args.down or down,
        repeats=args.repeats,
        timing=not args.no_timing,
    )


def _emit(rows, spec, manifests, out):
    if out is None:
        sys.stdout.write(bench.rows_to_csv(rows))
        return
    bench.write_csv(rows, out)
    bench.write_metadata(f"{out}.meta", bench.experiment_metadata(spec, manifests))
    print(f"wrote {len(rows)} rows to {out}")


def cmd_bench(args):
    """Regenerate the benchmark tables as CSV."""
    if args.table == "manifest":
        manifest = bench.DatasetManifest.from_directory(args.directory)
        path = manifest.write(args.out)
        print(f"wrote {len(manifest.entries)} entries to {path}")
        return EXIT_OK
    if args.table == "table4":
        datasets = args.dataset or list(bench.BENCHMARK_DATASETS)
    else:
        datasets = args.dataset or ["desk5"]
        if len(datasets) != 1:
            raise _flag_error(f"{args.table} takes a single --dataset")
    args.dataset = datasets
    manifests = [bench.resolve_dataset(d, args.data_root) for d in datasets]
    if args.table == "table1":
        spec = _experiment(args, "table1", ("bilinear", "bicubic"), (2,), "nearest")
        rows = bench.run_table1(manifests[0], spec)
    elif args.table == "table3":
        spec = _experiment(args, "table3", ("bilinear", "bicubic", "lanczos"), (2, 3, 4), "bicubic")
        rows = bench.run_table3(manifests[0], spec)
    else:
        spec = _experiment(args, "table4", ("lanczos",), (2, 3, 4), "bicubic")
        rows = bench.run_table4_ours(manifests, spec)
    _emit(rows, spec, manifests, args.out)
    return EXIT_OK


def cmd_fetch_instructions(args):
    """Print where to obtain the benchmark datasets."""
    sys.stdout.write(bench.FETCH_INSTRUCTIONS)
    return EXIT_OK


def _add_common(p, threads=True):
    if threads:
        p.add_argument("--threads", type=_positive(int), default=None,
                       help="cap internal parallelism (default: all cores)")


def _add_warp_flags(p):
    p.add_argument("--kernel", choices=sorted(KERNELS), default="bilinear",
                   help="intra-channel interpolation kernel (default: bilinear)")
    p.add_argument("--mode", choices=("independent", "correlated"), default="correlated",
                   help="warp channels independently or add cross-channel detail (default: correlated)")
    p.add_argument("--weights", default=None,
                   help="weight file for --mode correlated (default: built-in gains for the kernel)")
    p.add_argument("--stride", type=_positive(int), default=DEFAULT_STRIDE,
                   help=f"Laplacian neighbour distance (default: {DEFAULT_STRIDE})")


def build_parser():
    parser = _Parser(prog="chromawarp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("upscale", help=cmd_upscale.__doc__, description=cmd_upscale.__doc__)
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--scale", type=_positive(float), required=True, help="scale factor S > 0")
    _add_warp_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_upscale)

    p = sub.add_parser("warp", help=cmd_warp.__doc__, description=cmd_warp.__doc__)
    p.add_argument("input")
    p.add_argument("output")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--affine", help="6 numbers, row-major 2x3 forward map on (row, col, 1)")
    g.add_argument("--homography", help="9 numbers, row-major 3x3 forward map on (row, col, 1)")
    p.add_argument("--size", type=_dims, default=None, help="target HxW (default: input size)")
    _add_warp_flags(p)
    _add_common(p)
    p.set_defaults(func=cmd_warp)

    p = sub.add_parser("demosaic-refine", help=cmd_demosaic_refine.__doc__,
                       description=cmd_demosaic_refine.__doc__)
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--patterns", type=_csv_list(CfaPattern.coerce),
                   default=DEFAULT_SEQUENCE,
                   help="comma-separated CFA order, e.g. grbg,rggb,bggr (the default)")
    _add_common(p)
    p.set_defaults(func=cmd_demosaic_refine)

    p = sub.add_parser("train", help=cmd_train.__doc__, description=cmd_train.__doc__)
    p.add_argument("corpus", help="directory of ground-truth images (.png, .ppm or float .npy)")
    p.add_argument("output", help="weight file to write; metadata goes to OUTPUT.meta")
    p.add_argument("--scale", type=float, default=4.0, help="training scale factor (default: 4)")
    p.add_argument("--kernel", choices=sorted(KERNELS), default="bilinear",
                   help="interpolation kernel the gains are trained for (default: bilinear)")
    p.add_argument("--samples", type=_positive(int), default=10000,
                   help="total training pixels K across the corpus (default: 10000)")
    p.add_argument("--loss", choices=("mse", "mae"), default="mse",
                   help="squared or absolute residual loss (default: mse)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default: 0)")
    p.add_argument("--stride", type=_positive(int), default=DEFAULT_STRIDE,
                   help=f"Laplacian neighbour distance (default: {DEFAULT_STRIDE})")
    p.add_argument("--lowres-dir", default=None,
                   help="matching low-resolution inputs (same file names); "
                        "default: bicubic-downsample the corpus")
    _add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("bench", help=cmd_bench.__doc__, description=cmd_bench.__doc__)
    tables = p.add_subparsers(dest="table", required=True, parser_class=_Parser)
    for name, doc in (("table1", "upsampling followed by HQLI refinement"),
                      ("table3", "independent vs correlated warps per kernel and scale"),
                      ("table4", "correlated Lanczos warps over the benchmark datasets")):
        t = tables.add_parser(name, help=doc, description=doc)
        t.add_argument("--dataset", action="append", default=None,
                       help="built-in name (desk5, holdout), directory or manifest; repeatable for table4")
        t.add_argument("--data-root", default=None,
                       help="directory holding datasets by name (default: $CHROMAWARP_DATA)")
        t.add_argument("--out", default=None, help="CSV path (default: stdout); metadata goes to OUT.meta")
        t.add_argument("--scale", type=_csv_list(_positive(float)), default=None,
                       help="comma-separated scale factors")
        t.add_argument("--kernels", type=_csv_list(str), default=None,
                       help="comma-separated kernels")
        t.add_argument("--weights", default=None, help="weight file (default: built-in gains)")
        t.add_argument("--stride", type=_positive(int), default=DEFAULT_STRIDE,
                       help=f"Laplacian neighbour distance (default: {DEFAULT_STRIDE})")
        t.add_argument("--crop", type=int, default=0, help="border pixels excluded from PSNR")
        t.add_argument("--psnr-space", choices=("rgb", "y"), default="rgb",
                       help="PSNR over joint RGB or the YCbCr Y channel (default: rgb)")
        t.add_argument("--down", choices=("nearest", "bicubic"), default=None,
                       help="downsampling used to make inputs")
        t.add_argument("--repeats", type=_positive(int), default=5, help="timed runs per image")
        t.add_argument("--no-timing", action="store_true", help="skip timing (time_s is 0)")
        _add_common(t)
        t.set_defaults(func=cmd_bench)
    t = tables.add_parser("manifest", help="hash a directory into MANIFEST.sha256",
                          description="hash a directory into MANIFEST.sha256")
    t.add_argument("directory")
    t.add_argument("--out", default=None, help="manifest path (default: DIRECTORY/MANIFEST.sha256)")
    _add_common(t, threads=False)
    t.set_defaults(func=cmd_bench, threads=None)

    p = sub.add_parser("fetch-instructions", help=cmd_fetch_instructions.__doc__,
                       description=cmd_fetch_instructions.__doc__)
    p.set_defaults(func=cmd_fetch_instructions, threads=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "bench" and args.table != "manifest":
            for k in args.kernels or ():
                if k not in KERNELS:
                    raise _flag_error(f"unknown kernel {k!r}; choose from {', '.join(sorted(KERNELS))}")
        _set_threads(args.threads)
        return args.func(args)
    except CliError as exc:
        msg, code, status = str(exc), exc.code, exc.status
    except (ImageFormatError, WeightFileError) as exc:
        msg, code, status = str(exc), "ERR_FORMAT", EXIT_RUNTIME
    except (DegenerateDataError, SingularMapError) as exc:
        msg, code, status = str(exc), "ERR_DEGENERATE", EXIT_RUNTIME
    except (OSError, bench.ManifestError) as exc:
        msg, code, status = str(exc), "ERR_IO", EXIT_RUNTIME
    except ValueError as exc:
        msg, code, status = str(exc), "ERR_DEGENERATE", EXIT_RUNTIME
    first, _, rest = msg.partition("\n")
    print(f"{code} {first}", file=sys.stderr)
    if rest:
        print(rest, file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
