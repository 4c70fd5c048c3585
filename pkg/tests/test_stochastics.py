import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from nritt import calculus as ca
from nritt import funclass as fc
from nritt import stochastics as st
from nritt.matrixkit import Operator, op_norm
from nritt.regions import nstolz

z = fc.z


def cvecs(rng, N, d):
    return rng.standard_normal((N, d)) + 1j * rng.standard_normal((N, d))


def test_single_vector_is_its_norm(rng):
    x = cvecs(rng, 1, 4)
    for kind in ("p1", "p2", "pinf"):
        from nritt.matrixkit import vector_norm

        assert st.rad_norm(x, kind).value == pytest.approx(float(vector_norm(x[0], kind)), rel=1e-15)


def test_p2_is_hilbert_square_sum(rng):
    x = cvecs(rng, 7, 3)
    assert st.rad_norm(x, "p2").value == pytest.approx(math.sqrt(np.sum(np.abs(x) ** 2)), rel=1e-14)


def test_p1_hand_example():
    r = st.rad_norm([[1, 0], [0, 1]], "p1")
    assert r.value == 2.0 and r.method == "exhaustive" and r.samples == 4


def test_exhaustive_definition(rng):
    x = cvecs(rng, 5, 2)
    total = 0.0
    for s in itertools.product((1, -1), repeat=5):
        total += np.sum(np.abs(np.array(s) @ x)) ** 2
    assert st.rad_norm(x, "p1").value == pytest.approx(math.sqrt(total / 32), rel=1e-14)


def test_monte_carlo_agrees_with_exhaustive(rng):
    for _ in range(20):
        x = cvecs(rng, int(rng.integers(2, 9)), 3)
        ex = st.rad_norm(x, "pinf", "exhaustive")
        mc = st.rad_norm(x, "pinf", "montecarlo", samples=20_000, seed=int(rng.integers(2**31)))
        assert mc.method == "montecarlo" and mc.stderr > 0
        assert abs(mc.value - ex.value) <= 3 * mc.stderr + 1e-12


def test_auto_switches_to_monte_carlo(rng):
    r = st.rad_norm(cvecs(rng, 15, 2), "p2", samples=1000)
    assert r.method == "montecarlo"


@settings(max_examples=50, deadline=None)
@given(hst.integers(0, 2**32 - 1), hst.floats(-100, 100), hst.sampled_from(["p1", "p2", "pinf"]))
def test_homogeneity(seed, t, kind):
    x = cvecs(np.random.default_rng(seed), 4, 3)
    a = st.rad_norm(x, kind).value
    b = st.rad_norm(t * x, kind).value
    assert b == pytest.approx(abs(t) * a, rel=1e-12, abs=1e-300)


@settings(max_examples=50, deadline=None)
@given(hst.integers(0, 2**32 - 1), hst.sampled_from(["p1", "p2", "pinf"]))
def test_concatenation_subadditive(seed, kind):
    rng = np.random.default_rng(seed)
    x, y = cvecs(rng, 3, 2), cvecs(rng, 4, 2)
    both = st.rad_norm(np.vstack([x, y]), kind, "exhaustive").value
    assert both <= st.rad_norm(x, kind).value + st.rad_norm(y, kind).value + 1e-10


def test_r_bound_identity():
    assert abs(st.estimate_r_bound([Operator.identity(3)]).C_lower - 1) < 1e-10


def test_r_bound_singleton_recovers_norm(rng):
    A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    est = st.estimate_r_bound([Operator(A)])
    assert abs(est.C_lower - np.linalg.norm(A, 2)) < 1e-2
    assert est.C_lower <= np.linalg.norm(A, 2) * (1 + 1e-12)


def test_r_bound_projections():
    P = [Operator(np.diag([1.0, 0.0])), Operator(np.diag([0.0, 1.0]))]
    assert st.estimate_r_bound(P).C_lower <= 1 + 1e-12


def test_r_bound_monotone_in_family(rng):
    ops = [Operator(rng.standard_normal((3, 3))) for _ in range(3)]
    prev = 0.0
    for k in range(1, 4):
        c = st.estimate_r_bound(ops[:k], trials=16, refine=False).C_lower
        assert c >= prev
        prev = c


def test_r_bound_deterministic(rng):
    ops = [Operator(rng.standard_normal((3, 3)), "p1") for _ in range(2)]
    a = st.estimate_r_bound(ops, trials=8, seed=7)
    b = st.estimate_r_bound(ops, trials=8, seed=7)
    assert a.C_lower == b.C_lower and a.witness["indices"] == b.witness["indices"]


def test_quadratic_single_function_consistent_with_calculus_norm():
    T = Operator.from_spectrum([0.3, 0.8], np.array([[1, 0.4], [0, 1]]))
    g = (1 - z) ** 2
    region = nstolz(1, 1.0)
    q = st.estimate_quadratic_calculus(T, region, [g])
    k = ca.estimate_calculus_norm(T, region, [g])
    assert q.C_lower <= k.K_lower * (1 + 1e-9)
    # the ascent reaches the operator norm ratio for a single function
    assert q.C_lower == pytest.approx(k.K_lower, rel=1e-6)


def test_quadratic_scalar_closed_form():
    a = 0.4
    T = Operator.from_spectrum([a])
    fam = fc.stolz_test_family(3)
    region = nstolz(1, 1.0)
    q = st.estimate_quadratic_calculus(T, region, fam)
    want = math.sqrt(sum(abs(g(a)) ** 2 for g in fam)) / float(fc.square_sup_norm(fam, region))
    assert q.C_lower == pytest.approx(want, rel=1e-9)
    assert q.C_lower <= 1


def test_quadratic_zero_family():
    T = Operator.from_spectrum([0.2, 0.5])
    assert st.estimate_quadratic_calculus(T, nstolz(1, 1.0), [fc.const(0), fc.const(0)]).C_lower == 0


def test_quadratic_estimate_is_a_lower_bound_under_p1():
    T = Operator.from_spectrum([0.2, 0.6], np.array([[1, 0.5], [0.2, 1]]), "p1")
    fam = fc.stolz_test_family(2)
    q = st.estimate_quadratic_calculus(T, nstolz(1, 1.0), fam, x_samples=16)
    # crude upper bound from the triangle inequality
    bound = sum(op_norm(ca.apply_extended(T, g, 1, gamma=1.0)) for g in fam)
    assert 0 < q.C_lower * float(fc.square_sup_norm(fam, nstolz(1, 1.0))) <= bound
