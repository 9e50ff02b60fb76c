import numpy as np
import pytest

ACCEPTANCE_LINES = []


def report(criterion, status, detail):
    line = f"[{status:4s}] criterion {criterion:>2}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def smooth_image(rng, h, w, sigma=2.0):
    """Random smooth RGB image in [0, 1] with correlated channels."""
    base = rng.random((h + 8, w + 8))
    k = np.exp(-0.5 * (np.arange(-4, 5) / sigma) ** 2)
    k /= k.sum()
    for axis in (0, 1):
        base = np.apply_along_axis(lambda v: np.convolve(v, k, mode="same"), axis, base)
    base = base[4:-4, 4:-4]
    base = (base - base.min()) / (np.ptp(base) + 1e-12)
    chroma = 0.15 * rng.random((1, 1, 3)) * rng.standard_normal((h, w, 1))
    return np.clip(base[..., None] * rng.uniform(0.6, 1.0, 3) + chroma, 0, 1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
