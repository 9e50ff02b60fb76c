import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chromawarp.image import quantize
from chromawarp.metrics import luma, psnr, ssim, time_op

from oracles import psnr_literal


def test_psnr_identical_is_inf(rng):
    a = rng.random((5, 5, 3))
    assert psnr(a, a) == math.inf


def test_psnr_one_level():
    a = np.full((4, 4, 3), 100 / 255)
    b = np.full((4, 4, 3), 101 / 255)
    assert psnr(a, b) == pytest.approx(20 * math.log10(255), abs=1e-12)
    assert psnr(a, b) == pytest.approx(48.1308, abs=1e-4)


def test_psnr_zero_db():
    assert psnr(np.zeros((1, 1, 3)), np.ones((1, 1, 3))) == 0.0


@settings(max_examples=50)
@given(st.integers(0, 2**31))
def test_psnr_symmetric_and_literal(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.random((6, 7, 3)), rng.random((6, 7, 3))
    assert psnr(a, b) == psnr(b, a)
    assert psnr(a, b) == pytest.approx(psnr_literal(quantize(a), quantize(b)), abs=1e-12)


@given(st.integers(0, 2**31))
def test_psnr_monotone_in_noise(seed):
    rng = np.random.default_rng(seed)
    a = rng.random((16, 16, 3)) * 0.5 + 0.25
    u = rng.uniform(-1, 1, a.shape)
    values = [psnr(a, a + amp * u) for amp in (0.01, 0.02, 0.05, 0.1, 0.2)]
    assert all(x >= y for x, y in zip(values, values[1:]))


def test_psnr_crop_and_y(rng):
    a, b = rng.random((10, 10, 3)), rng.random((10, 10, 3))
    b[:2] = a[:2]
    assert psnr(a, b, crop=2) != psnr(a, b)
    assert math.isfinite(psnr(a, b, space="y"))
    with pytest.raises(ValueError):
        psnr(a, b, crop=5)
    with pytest.raises(ValueError):
        psnr(a, b, space="lab")
    with pytest.raises(ValueError):
        psnr(a, b[:5])


def test_ssim_identity_and_inversion(rng):
    a = rng.random((20, 20, 3))
    assert ssim(a, a) == 1.0
    assert ssim(a, 1.0 - a) < 1.0


@settings(max_examples=30)
@given(st.integers(0, 2**31))
def test_ssim_bounded(seed):
    rng = np.random.default_rng(seed)
    a = rng.random((16, 16, 3))
    b = np.clip(a + 0.1 * rng.standard_normal(a.shape), 0, 1)
    assert ssim(a, b) < 1.0


def test_ssim_against_reference(rng):
    skm = pytest.importorskip("skimage.metrics")
    a = rng.random((40, 36, 3))
    b = np.clip(a + 0.05 * rng.standard_normal(a.shape), 0, 1)
    ya, yb = luma(quantize(a)), luma(quantize(b))
    ref = skm.structural_similarity(ya, yb, data_range=255, gaussian_weights=True, sigma=1.5,
                                    use_sample_covariance=False)
    assert ssim(a, b) == pytest.approx(ref, abs=1e-10)


def test_ssim_too_small():
    with pytest.raises(ValueError):
        ssim(np.zeros((5, 5, 3)), np.zeros((5, 5, 3)))


def test_time_op_noop():
    assert time_op(lambda: None) < 1e-4
    with pytest.raises(ValueError):
        time_op(lambda: None, repeats=0)


def test_time_op_stable():
    big = np.random.default_rng(0).random(2_000_000)
    op = lambda: np.sort(big)
    a, b = time_op(op, repeats=7, warmup=2), time_op(op, repeats=7, warmup=2)
    assert abs(a - b) / max(a, b) <= 0.2
