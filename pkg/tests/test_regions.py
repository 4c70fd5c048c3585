import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as hst
from scipy.spatial import Delaunay

from nritt.errors import InvalidAngle
from nritt.regions import (
    NSECTOR,
    NSTOLZ,
    Region,
    boundary_distance,
    boundary_points,
    contains,
    contains_closed,
    max_angle,
    nsector,
    nstolz,
    sample_interior,
    stolz_contains,
    tangent_points,
)

coords = hst.floats(-3, 3, allow_nan=False)


def hull_oracle(gamma, z, m=4000):
    """Brute-force membership in conv({1} u disc(0, sin gamma)) via a Delaunay triangulation."""
    t = np.linspace(0, 2 * np.pi, m, endpoint=False)
    pts = np.c_[math.sin(gamma) * np.cos(t), math.sin(gamma) * np.sin(t)]
    tri = Delaunay(np.vstack([pts, [1.0, 0.0]]))
    z = np.atleast_1d(z)
    return tri.find_simplex(np.c_[z.real, z.imag]) >= 0


def support_oracle(gamma, z, m=20000):
    """Support-function test on a dense direction grid."""
    u = np.exp(1j * np.linspace(0, 2 * np.pi, m, endpoint=False))
    lhs = np.real(z * np.conj(u))
    rhs = np.maximum(np.real(np.conj(u)), math.sin(gamma))
    return bool(np.all(lhs < rhs))


def test_contains_examples():
    assert contains(nstolz(1, math.pi / 4), 0)
    assert not contains(nstolz(1, math.pi / 4), 1)
    assert contains(nsector(2, math.pi / 6), -1)


def test_double_stolz_at_one_and_a_half():
    assert contains(nstolz(2, math.pi / 4), 1.5)
    # 2 - 1.5 = 0.5 must sit in the base domain
    assert hull_oracle(math.pi / 4, 0.5)[0]


def test_stolz_membership_against_hull_oracle(rng):
    for g in (0.2, 0.7, 1.2, 1.5):
        z = rng.uniform(-1, 1.2, 3000) + 1j * rng.uniform(-1, 1, 3000)
        ours = stolz_contains(g, z)
        orc = hull_oracle(g, z)
        d = np.asarray(boundary_distance(nstolz(1, g), z))
        far = d > 1e-3  # the polygonal oracle is only accurate to its resolution
        assert np.array_equal(ours[far], orc[far])


@settings(max_examples=60, deadline=None)
@given(coords, coords, hst.floats(0.05, 1.5))
def test_stolz_membership_against_support_function(x, y, g):
    z = complex(x, y)
    assume(float(boundary_distance(nstolz(1, g), z)) > 1e-6)
    assert bool(stolz_contains(g, z)) == support_oracle(g, z)


def test_tangent_points_are_tangent():
    for g in (0.1, 0.5, 1.0, 1.5):
        pu, pl = tangent_points(g)
        assert abs(abs(pu) - math.sin(g)) < 1e-15
        assert abs(((pu - 1) * np.conj(pu)).real) < 1e-15
        assert pl == np.conj(pu)


def test_boundary_distance_examples():
    assert boundary_distance(nstolz(1, math.pi / 3), 1) < 1e-12
    assert boundary_distance(nsector(1, math.pi / 4), 0) < 1e-12
    d = float(boundary_distance(nstolz(1, math.pi / 4), 0))
    # dense polyline oracle for the same boundary
    poly = boundary_points(nstolz(1, math.pi / 4), 20000)
    assert abs(d - np.min(np.abs(poly))) < 1e-3
    assert abs(d - math.sin(math.pi / 4)) < 1e-12


def test_boundary_distance_nonnegative_and_zero_on_boundary(rng):
    for reg in (nstolz(2, 0.6), nsector(3, 0.4)):
        pts = boundary_points(reg, 500, r_range=(1e-3, 1e3))
        assert np.max(boundary_distance(reg, pts)) < 1e-9
        z = rng.standard_normal(200) + 1j * rng.standard_normal(200)
        assert np.all(np.asarray(boundary_distance(reg, z)) >= 0)


def test_closed_membership_includes_vertex():
    assert contains_closed(nstolz(1, 0.5), 1.0)
    assert contains_closed(nsector(1, 0.5), 0.0)
    assert not contains_closed(nstolz(1, 0.5), 1.01)


def test_invalid_angles():
    with pytest.raises(InvalidAngle):
        nsector(2, math.pi / 2)
    with pytest.raises(InvalidAngle):
        nstolz(3, 0)
    # Stolz domains stop nesting past pi/2, so n = 1 is capped there
    with pytest.raises(InvalidAngle):
        nstolz(1, 2.0)
    assert max_angle(NSECTOR, 1) == math.pi
    assert max_angle(NSTOLZ, 1) == math.pi / 2
    assert max_angle(NSTOLZ, 3) == math.pi / 3


def test_serialisation_round_trip():
    r = nstolz(2, 0.4)
    assert r.to_dict() == {"kind": "nstolz", "n": 2, "angle": 0.4}
    assert Region.from_dict(r.to_dict()) == r


def test_sample_interior_members(rng):
    for reg in (nstolz(1, 0.3), nstolz(3, 0.9), nsector(2, 0.5)):
        pts = sample_interior(reg, 500, rng)
        assert np.all(contains(reg, pts))


@settings(max_examples=200, deadline=None)
@given(coords, coords, hst.integers(1, 4), hst.floats(0.02, 0.98), hst.floats(0.0, 1.0), hst.sampled_from([NSTOLZ, NSECTOR]))
def test_nesting(x, y, n, a, b, kind):
    top = max_angle(kind, n)
    g1 = a * top
    g2 = g1 + b * (top - g1) * 0.999
    assume(g2 > g1)
    z = complex(x, y)
    if contains(Region(kind, n, g1), z):
        assert contains(Region(kind, n, g2), z)


@settings(max_examples=200, deadline=None)
@given(coords, coords, hst.integers(1, 4), hst.floats(0.02, 0.98))
def test_sector_rotation_symmetry(x, y, n, a):
    reg = nsector(n, a * math.pi / n)
    z = complex(x, y)
    zr = z * np.exp(2j * math.pi / n)
    assume(float(boundary_distance(reg, z)) > 1e-9)
    assert contains(reg, z) == contains(reg, zr)


@settings(max_examples=200, deadline=None)
@given(coords, coords, hst.integers(1, 4), hst.floats(0.02, 0.98))
def test_stolz_reflection_symmetry(x, y, n, a):
    reg = nstolz(n, a * max_angle(NSTOLZ, n))
    z = complex(x, y)
    assume(float(boundary_distance(reg, z)) > 1e-9)
    assert contains(reg, z) == contains(reg, np.conj(z))


def test_base_stolz_inside_unit_disc(rng):
    for g in (0.1, 0.8, 1.5):
        z = rng.uniform(-1.2, 1.2, 20000) + 1j * rng.uniform(-1.2, 1.2, 20000)
        inside = z[stolz_contains(g, z)]
        assert inside.size > 0 and np.all(np.abs(inside) <= 1)
