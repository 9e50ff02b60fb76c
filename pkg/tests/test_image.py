import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from chromawarp.image import (
    BoundaryPolicy, ImageFormatError, load_image, quantize, resolve_index, sample_at, save_image,
)


def test_ppm_all_white(tmp_path):
    p = tmp_path / "w.ppm"
    p.write_bytes(b"P6\n2 2\n255\n" + b"\xff" * 12)
    img = load_image(p)
    assert img.shape == (2, 2, 3)
    assert np.all(img == 1.0)


def test_png_single_pixel(tmp_path):
    p = tmp_path / "px.png"
    Image.fromarray(np.array([[[128, 64, 0]]], dtype=np.uint8)).save(p)
    img = load_image(p)
    np.testing.assert_array_equal(img[0, 0], [128 / 255, 64 / 255, 0.0])


def test_ppm_with_comment_and_gray(tmp_path):
    p = tmp_path / "g.pgm"
    p.write_bytes(b"P5\n# made by hand\n2 1\n255\n\x00\xff")
    img = load_image(p)
    assert img.shape == (1, 2, 3)
    np.testing.assert_array_equal(img[0, 1], [1, 1, 1])


@pytest.mark.parametrize("payload", [
    b"P6\n2 2\n",                      # truncated header
    b"P6\n2 2\n255\n" + b"\x00" * 5,   # truncated data
    b"P6\n2 2\n65535\n" + b"\x00" * 24,  # 16-bit
    b"GIF89a....",                     # unknown signature
])
def test_malformed_inputs(tmp_path, payload):
    p = tmp_path / "bad.ppm"
    p.write_bytes(payload)
    with pytest.raises(ImageFormatError):
        load_image(p)


def test_png_with_alpha_rejected(tmp_path):
    p = tmp_path / "a.png"
    Image.fromarray(np.zeros((2, 2, 4), dtype=np.uint8)).save(p)
    with pytest.raises(ImageFormatError, match="RGBA"):
        load_image(p)


def test_missing_file():
    with pytest.raises(OSError):
        load_image("/nonexistent/file.png")


def test_quantize_rules():
    v = np.array([[[1.2, -0.1, 0.5]]])
    np.testing.assert_array_equal(quantize(v)[0, 0], [255, 0, 128])


@pytest.mark.parametrize("ext", [".png", ".ppm"])
def test_save_load_exact_bytes(tmp_path, rng, ext):
    q = rng.integers(0, 256, (5, 7, 3), dtype=np.uint8)
    img = q / 255.0
    path = tmp_path / f"x{ext}"
    save_image(img, path)
    np.testing.assert_array_equal(quantize(load_image(path)), q)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (3, 4, 3), elements=st.floats(0, 1)))
def test_round_trip_half_step(tmp_path_factory, img):
    path = tmp_path_factory.mktemp("rt") / "i.png"
    save_image(img, path)
    back = load_image(path)
    assert back.shape == img.shape
    assert np.max(np.abs(back - img)) <= 1 / 510 + 1e-12


def test_save_unknown_extension(tmp_path):
    with pytest.raises(ImageFormatError):
        save_image(np.zeros((2, 2, 3)), tmp_path / "x.jpg")


def test_boundary_examples():
    p = np.arange(9.0).reshape(3, 3)
    assert sample_at(p, -1, 0, BoundaryPolicy.REPLICATE) == p[0, 0]
    assert sample_at(p, -1, 0, BoundaryPolicy.REFLECT) == p[1, 0]
    assert sample_at(p, 1, 1) == p[1, 1]


@given(st.integers(-50, 50), st.integers(1, 9))
def test_resolve_index_in_range(i, n):
    for policy in BoundaryPolicy:
        r = resolve_index(np.array([i]), n, policy)[0]
        assert 0 <= r < n
        if 0 <= i < n:
            assert r == i
