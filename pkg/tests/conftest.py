import math

import numpy as np
import pytest

from nritt import funclass as fc
from nritt.matrixkit import Operator
from nritt.regions import NSTOLZ, max_angle, nstolz, sample_interior

ACCEPTANCE_LINES = {}


def random_similarity(rng, d, spread=0.3):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return np.eye(d) + spread * g / math.sqrt(d)


def random_ritt(rng, n, d=None, lo=0.2, hi=0.8):
    """Similarity-transformed diagonal operator with spectrum inside a random n-Stolz domain."""
    d = int(rng.integers(2, 9)) if d is None else d
    a0 = rng.uniform(lo, hi) * max_angle(NSTOLZ, n)
    eig = sample_interior(nstolz(n, a0), d, rng)
    return Operator.from_spectrum(eig, random_similarity(rng, d))


def stolz_phis():
    """Certified test functions decaying at 1 with poles far from every n-Stolz domain."""
    z = fc.z
    return [1 - z, (1 - z) ** 2, (1 - z) * z**3, (1 - z) / (3.5 - z), (1 - z) ** 3 / (z - (1 + 2.5j))]


def rel_err(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.linalg.norm(a - b, 2) / max(np.linalg.norm(b, 2), 1e-300))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
