import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from conftest import random_ritt, rel_err, stolz_phis
from nritt import calculus as ca
from nritt import funclass as fc
from nritt.errors import InvalidAngle, NotClassifiable, Unbounded
from nritt.matrixkit import Operator, op_norm
from nritt.regions import NSTOLZ, Region, max_angle, nsector, nstolz

z = fc.z
GRID = ca.angle_grid(1, 16)


def diag_bound_oracle(eigs, kind, n, alpha, grid, density, ritt=True):
    """sup over the same sample shells of max_k |w(l)| / |l - e_k| for a diagonal operator."""
    best = 0.0
    for b in grid[grid > alpha]:
        lam = ca.shell_points(Region(kind, n, b), density)
        w = np.abs(lam - 1) if ritt else np.abs(lam)
        best = max(best, float(np.max(w[:, None] / np.abs(lam[:, None] - np.asarray(eigs)[None, :]))))
    return best


def test_classify_diagonal():
    T = Operator.from_spectrum([0.5, 0.9])
    rep = ca.classify_ritt(T, 1, GRID, density=16)
    assert rep.admissible and rep.type_angle <= math.pi / 4
    want = diag_bound_oracle([0.5, 0.9], NSTOLZ, 1, rep.type_angle, GRID, 16)
    assert rep.resolvent_bound == pytest.approx(want, rel=1e-12)


def test_classify_rejects_outside_spectrum():
    with pytest.raises(NotClassifiable):
        ca.classify_ritt(Operator.from_spectrum([2.0]), 1)
    with pytest.raises(NotClassifiable):
        ca.classify_sectorial(Operator.from_spectrum([-1.0]), 1)


def test_classify_zero_operator():
    rep = ca.classify_ritt(Operator(np.zeros((3, 3))), 1, GRID, density=16)
    assert rep.admissible
    assert rep.type_angle == GRID[0]
    want = diag_bound_oracle([0.0], NSTOLZ, 1, rep.type_angle, GRID, 16)
    assert rep.resolvent_bound == pytest.approx(want, rel=1e-12)


def test_classify_sectorial_diagonal():
    grid = ca.angle_grid(1, 16, "nsector")
    rep = ca.classify_sectorial(Operator.from_spectrum([0.5, 0.1]), 1, grid, density=16)
    assert rep.admissible
    want = diag_bound_oracle([0.5, 0.1], "nsector", 1, rep.type_angle, grid, 16, ritt=False)
    assert rep.resolvent_bound == pytest.approx(want, rel=1e-12)


def test_report_json_shape():
    d = ca.classify_ritt(Operator.from_spectrum([0.5]), 1, GRID, density=8).to_json()
    assert {"admissible", "type_angle", "resolvent_bound", "grid"} <= set(d)


def test_jordan_block_is_classified():
    J = Operator([[0.5, 1.0], [0.0, 0.5]])
    rep = ca.classify_ritt(J, 1, GRID, density=8)
    assert rep.admissible and math.isfinite(rep.resolvent_bound)


def test_ritt_implies_sectorial_for_one_minus(rng):
    for i in range(20):
        n = 1 + i % 3
        T = random_ritt(rng, n)
        grid = ca.angle_grid(n, 12)
        if ca.classify_ritt(T, n, grid, density=6).admissible:
            assert ca.classify_sectorial(T.one_minus(), n, grid, density=6).admissible


def test_apply_ritt_diagonal_example():
    T = Operator.from_spectrum([0.5, 0.9])
    val = ca.apply_ritt(T, (1 - z) ** 2)
    assert np.max(np.abs(np.asarray(val) - np.diag([0.25, 0.01]))) < 1e-8


def test_apply_zero_functions():
    T = Operator.from_spectrum([0.5, 0.9])
    assert np.max(np.abs(np.asarray(ca.apply_ritt(T, fc.const(0))))) < 1e-10
    A = T.one_minus()
    assert np.max(np.abs(np.asarray(ca.apply_sectorial(A, fc.const(0))))) < 1e-10


def test_apply_at_the_vertex_gives_zero():
    # spectrum {1}: the decay at the vertex makes phi(I) = phi(1) = 0
    val = ca.apply_ritt(Operator.identity(2), 1 - z, alpha=0.3)
    assert np.max(np.abs(np.asarray(val))) < 1e-8


def test_apply_sectorial_example():
    A = Operator.from_spectrum([0.5, 0.1])
    val = ca.apply_sectorial(A, z / (1 + z) ** 2)
    assert np.max(np.abs(np.asarray(val) - np.diag([0.5 / 2.25, 0.1 / 1.21]))) < 1e-8


def test_sectorial_angle_independence():
    A = Operator.from_spectrum([0.5, 0.1 + 0.05j], np.array([[1, 0.3], [0.1, 1]]))
    f = z / (1 + z) ** 2
    tol = 1e-10
    X = ca.apply_sectorial(A, f, 1, omega=0.5, theta=1.4, nu=0.7, tol=tol)
    Y = ca.apply_sectorial(A, f, 1, omega=0.5, theta=1.4, nu=1.2, tol=tol)
    assert np.max(np.abs(np.asarray(X) - np.asarray(Y))) < 2 * tol


def test_homomorphism_example(rng):
    T = random_ritt(rng, 2, d=4)
    f, g = (1 - z) ** 2, (1 - z) / (3.5 - z)
    FG = np.asarray(ca.apply_ritt(T, f * g, 2))
    assert np.max(np.abs(FG - np.asarray(ca.apply_ritt(T, f, 2)) @ np.asarray(ca.apply_ritt(T, g, 2)))) < 1e-7


def test_extended_constant_one_is_identity():
    T = Operator.from_spectrum([0.2, 0.7])
    assert np.allclose(np.asarray(ca.apply_extended(T, fc.const(1))), np.eye(2), atol=1e-15)


def test_extended_polynomial_matches_horner(rng):
    T = random_ritt(rng, 1, d=5)
    a = np.asarray(T)
    c = [0.3, -1, 2, 0.5j]
    want = sum(ck * np.linalg.matrix_power(a, k) for k, ck in enumerate(c))
    assert rel_err(ca.apply_extended(T, fc.poly(c)), want) < 1e-7


def test_extended_rational_matches_substitution(rng):
    T = random_ritt(rng, 2, d=4)
    psi = (z + 2) / (z - (1 + 2.5j))
    assert rel_err(ca.apply_extended(T, psi, 2), fc.substitute(psi, T)) < 1e-7


def test_pole_in_region_is_rejected():
    with pytest.raises(Unbounded):
        ca.apply_extended(Operator.from_spectrum([0.1]), 1 / (z - 0.7))


def test_bad_angle_order():
    T = Operator.from_spectrum([0.5, 0.9])
    with pytest.raises(InvalidAngle):
        ca.apply_ritt(T, 1 - z, 1, alpha=0.5, gamma=0.4, beta=0.45)


def test_r_limit_scalar_example():
    T = Operator.from_spectrum([0.5])
    rep = ca.approximate_r_limit(T, (1 - z) ** 2, [0.9, 1.0])
    assert rep.rows[0][1] == pytest.approx(0.0525, abs=1e-8)
    assert rep.rows[1] == (1.0, 0.0)
    assert math.isfinite(rep.uniform_bound)


def test_r_limit_deviations_decrease(rng):
    for i in range(10):
        T = random_ritt(rng, 1, d=3)
        phi = stolz_phis()[i % 5]
        devs = [d for _, d in ca.approximate_r_limit(T, phi, [0.9, 0.99, 0.999]).rows]
        assert devs[0] > devs[1] > devs[2]


def test_transfer_examples():
    T = Operator.from_spectrum([0.5, 0.9])
    assert ca.transfer_check(T, z / (1 + z) ** 2).deviation < 1e-7
    assert ca.transfer_check(T, fc.const(0)).deviation == 0


def test_transfer_random_double(rng):
    for _ in range(4):
        T = random_ritt(rng, 2, d=3)
        for f in fc.sector_test_family(2, 2):
            assert ca.transfer_check(T, f, 2).deviation < 1e-6


def test_calculus_norm_normal_operator():
    T = Operator.from_spectrum([0.3, 0.6 + 0.1j, 0.9])
    est = ca.estimate_calculus_norm(T, nstolz(1, 1.0), fc.stolz_test_family(3) + [fc.const(2)])
    assert est.K_lower <= 1 + 1e-3
    assert est.family_size == 4
    assert est.K_poly_lower is not None


def test_calculus_norm_constant_one():
    est = ca.estimate_calculus_norm(Operator.from_spectrum([0.3, 0.5]), nstolz(1, 1.0), [fc.const(1)])
    assert est.K_lower == 1.0


def test_calculus_norm_jordan_block():
    J = Operator([[0.5, 1.0], [0.0, 0.5]])
    g = 0.1  # small enough that (1 + sqrt 2)/2 > 1 + sin g
    est = ca.estimate_calculus_norm(J, nstolz(1, g), [1 - z])
    # closed form: phi(J) = I - J, sup |1 - l| over the Stolz domain is 1 + sin g
    want = op_norm(Operator(np.eye(2) - np.asarray(J))) / (1 + math.sin(g))
    assert est.K_lower > 1
    assert est.K_lower == pytest.approx(want, rel=1e-3)


def test_sector_calculus_norm():
    A = Operator.from_spectrum([0.5, 2.0])
    est = ca.estimate_calculus_norm(A, nsector(1, 1.0), fc.sector_test_family(1, 2))
    assert 0 < est.K_lower <= 1 + 1e-3


@settings(max_examples=15, deadline=None)
@given(hst.integers(1, 3), hst.integers(0, 2**32 - 1), hst.integers(0, 4))
def test_oracle_equivalence_property(n, seed, k):
    rng = np.random.default_rng(seed)
    T = random_ritt(rng, n, d=int(rng.integers(1, 6)))
    phi = stolz_phis()[k]
    assert rel_err(ca.apply_ritt(T, phi, n), ca.spectral_oracle(T, phi)) < 1e-7


@settings(max_examples=10, deadline=None)
@given(hst.integers(0, 2**32 - 1), hst.floats(-2, 2), hst.floats(-2, 2))
def test_linearity_property(seed, a, b):
    rng = np.random.default_rng(seed)
    T = random_ritt(rng, 2, d=3)
    f, g = stolz_phis()[1], stolz_phis()[3]
    tol = 1e-10
    L = np.asarray(ca.apply_ritt(T, a * f + b * g, 2, tol=tol))
    R = a * np.asarray(ca.apply_ritt(T, f, 2, tol=tol)) + b * np.asarray(ca.apply_ritt(T, g, 2, tol=tol))
    assert np.max(np.abs(L - R)) < 2 * tol * max(1, abs(a) + abs(b))


def test_default_angles_respect_stolz_cap():
    T = Operator.from_spectrum([0.5])
    _, info = ca.apply_ritt(T, 1 - z, 1, full_output=True)
    alpha, beta, gamma = info.angles
    assert alpha < beta < gamma < max_angle(NSTOLZ, 1)
