"""Pixel containers, boundary handling and 8-bit PNG/PPM file I/O.

Images are ``(H, W, 3)`` float64 arrays in RGB order with intensities in
``[0, 1]``; a channel plane is the ``(H, W)`` slice of one color.  All
arithmetic stays in floating point and quantization to 8 bits happens only
when writing files (or when a metric asks for it).
"""

import enum
import os
import re

import numpy as np
from PIL import Image, UnidentifiedImageError

from ._validation import check_image, check_plane

CHANNELS = ("R", "G", "B")


class ImageFormatError(ValueError):
    """Raised for malformed or unsupported image files."""


class BoundaryPolicy(enum.Enum):
    """How out-of-range indices are mapped back onto the grid.

    ``REPLICATE`` clamps the index to the nearest edge sample; ``REFLECT``
    mirrors about the edge sample, so index ``-1`` maps to ``1``.
    """

    REPLICATE = "replicate"
    REFLECT = "reflect"

    @classmethod
    def coerce(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown boundary policy {value!r}; expected one of "
                f"{[p.value for p in cls]}"
            ) from None


def resolve_index(idx, n, policy=BoundaryPolicy.REPLICATE):
    """Map integer indices (any shape) onto ``[0, n)`` according to `policy`."""
    idx = np.asarray(idx, dtype=np.intp)
    policy = BoundaryPolicy.coerce(policy)
    if policy is BoundaryPolicy.REPLICATE or n == 1:
        return np.clip(idx, 0, n - 1)
    period = 2 * (n - 1)
    r = np.mod(idx, period)
    return np.where(r < n, r, period - r)


def sample_at(plane, row, col, policy=BoundaryPolicy.REPLICATE):
    """Return ``plane[row, col]`` with out-of-bounds indices resolved by `policy`."""
    plane = check_plane(plane)
    h, w = plane.shape
    r = resolve_index(row, h, policy)
    c = resolve_index(col, w, policy)
    out = plane[r, c]
    return float(out) if np.ndim(out) == 0 else out


def quantize(img):
    """Clamp to ``[0, 1]`` and round ``v * 255`` half away from zero to uint8."""
    v = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    return np.floor(v * 255.0 + 0.5).astype(np.uint8)


def from_uint8(arr):
    return check_image(np.asarray(arr, dtype=np.float64) / 255.0)


# --------------------------------------------------------------------------
# PPM / PGM (binary)

_PNM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*(\S+)")


def _read_pnm(data, path):
    magic = data[:2]
    if magic not in (b"P6", b"P5"):
        raise ImageFormatError(f"{path}: not a binary PPM/PGM file (magic {magic!r})")
    pos = 2
    fields = []
    for _ in range(3):
        m = _PNM_TOKEN.match(data, pos)
        if m is None:
            raise ImageFormatError(f"{path}: truncated PPM header")
        tok = m.group(1)
        if not tok.isdigit():
            raise ImageFormatError(f"{path}: bad PPM header field {tok!r}")
        fields.append(int(tok))
        pos = m.end()
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise ImageFormatError(f"{path}: truncated PPM header")
    pos += 1
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: invalid dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(
            f"{path}: unsupported bit depth (maxval {maxval}, only 8-bit maxval 255 is supported)"
        )
    ch = 3 if magic == b"P6" else 1
    need = width * height * ch
    raster = data[pos:pos + need]
    if len(raster) < need:
        raise ImageFormatError(
            f"{path}: truncated pixel data ({len(raster)} of {need} bytes)"
        )
    arr = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, ch)
    return arr


def _write_ppm(q, path):
    h, w, _ = q.shape
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(q).tobytes())


# --------------------------------------------------------------------------
# PNG through Pillow

_PNG_MODES_OK = {"RGB", "L", "P"}


def _read_png(path):
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("RGBA", "LA", "PA") or (mode == "P" and "transparency" in im.info):
                raise ImageFormatError(
                    f"{path}: unsupported channel count (mode {mode} carries an alpha channel)"
                )
            if mode not in _PNG_MODES_OK:
                raise ImageFormatError(
                    f"{path}: unsupported bit depth or layout (mode {mode}); "
                    "only 8-bit RGB or grayscale is supported"
                )
            if mode == "P":
                im = im.convert("RGB")
            return np.asarray(im, dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise ImageFormatError(f"{path}: not a readable PNG ({exc})") from None
    except (SyntaxError, EOFError) as exc:
        raise ImageFormatError(f"{path}: corrupt PNG ({exc})") from None


def load_image(path):
    """Read an 8-bit PNG or binary PPM/PGM into a float image in ``[0, 1]``.

    Grayscale files are expanded to three identical planes.

    Raises
    ------
    OSError
        If the file cannot be read.
    ImageFormatError
        If the content is malformed or has an unsupported depth/layout.
    """
    path = os.fspath(path)
    with open(path, "rb") as fh:
        head = fh.read(8)
        if head[:2] in (b"P6", b"P5"):
            arr = _read_pnm(head + fh.read(), path)
        elif head == b"\x89PNG\r\n\x1a\n":
            arr = None
        else:
            raise ImageFormatError(f"{path}: unrecognized file signature {head[:8]!r}")
    if arr is None:
        arr = _read_png(path)
    return from_uint8(arr)


def save_image(img, path):
    """Write `img` as 8-bit PNG or PPM, chosen by the file extension.

    Values are clamped to ``[0, 1]`` and quantized by ``round(v * 255)``
    with halves rounded away from zero.
    """
    img = check_image(img, ensure_finite=False)
    path = os.fspath(path)
    ext = os.path.splitext(path)[1].lower()
    q = quantize(np.nan_to_num(img, nan=0.0))
    if ext == ".png":
        Image.fromarray(q).save(path, format="PNG")
    elif ext in (".ppm", ".pnm"):
        _write_ppm(q, path)
    else:
        raise ImageFormatError(f"{path}: unsupported output extension {ext!r} (use .png or .ppm)")
