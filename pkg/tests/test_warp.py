import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chromawarp.geometry import AffineMap, HomographyMap, ScaleMap
from chromawarp.kernels import KERNELS
from chromawarp.laplacian import laplacian_map
from chromawarp.warp import (
    PUBLISHED_WEIGHTS, WarpConfig, WeightFileError, WeightSet, default_weights, resolve_weights,
    warp, warp_correlated, warp_independent,
)

from conftest import smooth_image
from oracles import bilinear_literal

ALL = sorted(KERNELS)


def test_published_values():
    assert PUBLISHED_WEIGHTS["bilinear"].as_tuple() == (0.094, 0.119, 0.195, 0.008, 0.180, -0.003)
    assert PUBLISHED_WEIGHTS["bicubic"].as_tuple() == (0.045, 0.064, 0.096, 0.010, 0.089, 0.003)
    assert PUBLISHED_WEIGHTS["lanczos"].as_tuple() == (0.032, 0.041, 0.058, 0.015, 0.054, 0.008)
    assert default_weights("lanczos2") is PUBLISHED_WEIGHTS["lanczos"]
    with pytest.raises(ValueError):
        default_weights("nearest")


def test_weightset_validation():
    with pytest.raises(ValueError):
        WeightSet(1.0, 0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        WeightSet(float("nan"), 0, 0, 0, 0, 0)


def test_weight_file_round_trip(tmp_path):
    w = WeightSet(0.1, -0.2, 0.3, 1e-17, 0.5, -0.6)
    p = tmp_path / "w.txt"
    w.to_file(p)
    assert WeightSet.from_file(p) == w
    assert resolve_weights(str(p), "bilinear") == w


@pytest.mark.parametrize("text", [
    "w_gr 0.1\nw_gb 0.1\n", "w_gr 0.1\nw_gr 0.1\nw_gb 0\nw_rg 0\nw_rb 0\nw_bg 0\nw_br 0\n",
    "w_xx 0.1\n", "w_gr abc\n",
])
def test_weight_file_errors(tmp_path, text):
    p = tmp_path / "w.txt"
    p.write_text(text)
    with pytest.raises(WeightFileError):
        WeightSet.from_file(p)


@pytest.mark.parametrize("name", ALL)
def test_identity_map(name, rng):
    img = rng.random((6, 8, 3))
    for geo in (ScaleMap(1.0), AffineMap(np.array([[1.0, 0, 0], [0, 1, 0]])),
                HomographyMap(np.eye(3))):
        cfg = WarpConfig(name, geo)
        np.testing.assert_array_equal(warp_independent(img, cfg, 6, 8), img)


@pytest.mark.parametrize("name", ALL)
def test_constant_image(name):
    img = np.full((5, 5, 3), 0.4)
    w = PUBLISHED_WEIGHTS["bilinear"]
    for geo, dims in ((ScaleMap(2.3), (None, None)),
                      (AffineMap(np.array([[0.9, 0.2, 1], [-0.1, 1.1, 0]])), (7, 7))):
        cfg = WarpConfig(name, geo, w)
        np.testing.assert_allclose(warp_independent(img, cfg, *dims), 0.4, atol=1e-15)
        np.testing.assert_allclose(warp_correlated(img, cfg, *dims), 0.4, atol=1e-15)


def test_hand_value_two_by_two():
    img = np.zeros((2, 2, 3))
    img[..., 1] = [[0, 1], [2, 3]]
    cfg = WarpConfig("bilinear", ScaleMap(2.0), clamp_output=False)
    out = warp_independent(img, cfg)
    assert out.shape == (4, 4, 3)
    x, y, _ = cfg.map.inverse(1, 1)
    assert (x, y) == (0.25, 0.25)
    # (1 - s)(1 - t)*0 + s(1 - t)*2 + (1 - s)t*1 + st*3 at s = t = 1/4
    expected = bilinear_literal(img[..., 1], 0.25, 0.25)
    assert expected == 0.75
    assert out[1, 1, 1] == pytest.approx(expected, abs=1e-15)


def test_rotation_is_permutation(rng):
    img = rng.random((9, 9, 3))
    # forward map (x, y) -> (y, 8 - x): a 90 degree rotation of the lattice
    rot = AffineMap(np.array([[0.0, 1, 0], [-1, 0, 8]]))
    for name in ALL:
        out = warp_independent(img, WarpConfig(name, rot), 9, 9)
        np.testing.assert_array_equal(out, np.rot90(img, k=-1))


def test_correlated_needs_weights(rng):
    with pytest.raises(ValueError):
        warp_correlated(rng.random((4, 4, 3)), WarpConfig("bilinear", ScaleMap(2.0)))


def test_warp_mode_dispatch(rng):
    img = rng.random((4, 4, 3))
    cfg = WarpConfig("bilinear", ScaleMap(2.0), WeightSet.zeros())
    with pytest.raises(ValueError):
        warp(img, cfg, mode="both")


@pytest.mark.parametrize("name", ALL)
@pytest.mark.parametrize("scale", [1.5, 2.0, 3.0, 4.0])
def test_zero_weights_bit_identical(name, scale, rng):
    img = rng.random((13, 10, 3)) * 1.4 - 0.2
    cfg = WarpConfig(name, ScaleMap(scale), WeightSet.zeros(), clamp_output=False)
    np.testing.assert_array_equal(warp_correlated(img, cfg), warp_independent(img, cfg))
    lit = WarpConfig(name, ScaleMap(scale), WeightSet.zeros(), clamp_output=False, fused=False)
    np.testing.assert_array_equal(warp_correlated(img, lit), warp_independent(img, cfg))


def test_zero_weights_general_map(rng):
    img = rng.random((10, 10, 3))
    h = HomographyMap(np.array([[1.1, 0.1, -1], [0.05, 0.9, 0.5], [0.001, 0.002, 1]]))
    cfg = WarpConfig("bicubic", h, WeightSet.zeros())
    np.testing.assert_array_equal(warp_correlated(img, cfg, 12, 12), warp_independent(img, cfg, 12, 12))


@pytest.mark.parametrize("name", ALL)
def test_fused_matches_literal(name, rng):
    img = smooth_image(rng, 16, 12)
    w = PUBLISHED_WEIGHTS["bilinear"]
    a = warp_correlated(img, WarpConfig(name, ScaleMap(2.5), w, clamp_output=False))
    b = warp_correlated(img, WarpConfig(name, ScaleMap(2.5), w, clamp_output=False, fused=False))
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_identity_map_adds_laplacians(rng):
    img = rng.random((7, 7, 3))
    w = WeightSet(0.1, 0.2, 0.3, -0.1, 0.05, 0.15)
    out = warp_correlated(img, WarpConfig("bicubic", ScaleMap(1.0), w, clamp_output=False))
    lap = laplacian_map(img)
    exp = img.copy()
    exp[..., 0] += w.w_rg * lap[..., 1] + w.w_rb * lap[..., 2]
    exp[..., 1] += w.w_gr * lap[..., 0] + w.w_gb * lap[..., 2]
    exp[..., 2] += w.w_bg * lap[..., 1] + w.w_br * lap[..., 0]
    np.testing.assert_allclose(out, exp, atol=1e-14)


def test_gray_coherence(rng):
    gray = rng.random((9, 9))
    w = WeightSet(0.1, 0.2, 0.25, 0.05, -0.1, 0.4)   # every pair sums to 0.3
    out = warp_correlated(gray, WarpConfig("lanczos", ScaleMap(2.0), w, clamp_output=False))
    np.testing.assert_allclose(out[..., 0], out[..., 1], atol=1e-13)
    np.testing.assert_allclose(out[..., 2], out[..., 1], atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(ALL), st.integers(0, 2**31), st.floats(-2, 2), st.floats(-2, 2))
def test_correlated_linear(name, seed, a, b):
    rng = np.random.default_rng(seed)
    A, B = rng.random((8, 9, 3)), rng.random((8, 9, 3))
    cfg = WarpConfig(name, ScaleMap(1.7), PUBLISHED_WEIGHTS["bicubic"], clamp_output=False)
    lhs = warp_correlated(a * A + b * B, cfg)
    rhs = a * warp_correlated(A, cfg) + b * warp_correlated(B, cfg)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_point_at_infinity_filled_with_zero(rng):
    img = rng.random((8, 8, 3)) * 0.5 + 0.25
    h = HomographyMap(np.array([[1.0, 0, 0], [0, 1, 0], [0.25, 0, -1]]))
    out = warp_independent(img, WarpConfig("bilinear", h), 8, 8)
    np.testing.assert_array_equal(out[4], 0.0)   # row i = 4 has w = 0
    assert np.all(out[3] > 0)


def test_clamp(rng):
    img = np.zeros((6, 6, 3))
    img[3, 3] = 1.0
    cfg = WarpConfig("bicubic", ScaleMap(3.0), PUBLISHED_WEIGHTS["bicubic"])
    out = warp_correlated(img, cfg)
    assert out.min() >= 0 and out.max() <= 1
    raw = warp_correlated(img, WarpConfig("bicubic", ScaleMap(3.0), PUBLISHED_WEIGHTS["bicubic"],
                                          clamp_output=False))
    assert raw.min() < 0


def test_anisotropic_scale(rng):
    img = rng.random((4, 6, 3))
    out = warp_independent(img, WarpConfig("bilinear", ScaleMap(2.0, 1.5)))
    assert out.shape == (8, 9, 3)
