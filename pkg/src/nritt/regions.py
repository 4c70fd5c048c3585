"""Sectors, Stolz domains and their n-fold rotated unions.

Two region families are supported, both parametrised by a multiplicity
``n >= 1`` and an aperture angle below :func:`max_angle`:

``nsector``
    the union of the ``n`` open sectors of half-angle ``omega`` around the
    rays ``exp(2 i j pi / n) * (0, inf)``.
``nstolz``
    ``1 - union_j exp(2 i j pi / n) * (1 - B)``, where ``B`` is the open
    convex hull of the point 1 and the disc ``|z| < sin(gamma)``.

Sectors allow angles in ``(0, pi/n)``. Stolz domains stop at ``pi/2`` even
for n = 1: past that angle ``sin(gamma)`` decreases again and the domains
are no longer nested.

Membership is always for the OPEN region. Closure queries go through
:func:`contains_closed`, i.e. membership or boundary distance below a
tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidAngle

__all__ = [
    "NSECTOR",
    "NSTOLZ",
    "Region",
    "max_angle",
    "nsector",
    "nstolz",
    "contains",
    "contains_closed",
    "boundary_distance",
    "boundary_points",
    "sample_interior",
    "tangent_points",
    "stolz_contains",
]

NSECTOR = "nsector"
NSTOLZ = "nstolz"

#: default absolute tolerance for closure membership
CLOSURE_TOL = 1e-12


def max_angle(kind, n):
    """Supremum of admissible aperture angles: ``pi/n``, capped at ``pi/2`` for Stolz domains."""
    return math.pi / n if kind == NSECTOR else math.pi / max(n, 2)


@dataclass(frozen=True)
class Region:
    """An open n-sector or n-Stolz domain.

    Parameters
    ----------
    kind : {"nsector", "nstolz"}
    n : int
        Number of rotated copies, ``n >= 1``.
    angle : float
        Aperture angle in radians, ``0 < angle < max_angle(kind, n)``.
    """

    kind: str
    n: int
    angle: float

    def __post_init__(self):
        if self.kind not in (NSECTOR, NSTOLZ):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "angle", float(self.angle))
        top = max_angle(self.kind, self.n)
        if not 0.0 < self.angle < top:
            raise InvalidAngle(f"{self.kind} angle {self.angle!r} not in (0, {top!r}) for n={self.n}")

    @property
    def rotations(self):
        """The unit complex numbers ``exp(2 i j pi / n)``, j = 0..n-1."""
        return np.exp(2j * np.pi * np.arange(self.n) / self.n)

    @property
    def bounded(self):
        return self.kind == NSTOLZ

    def with_angle(self, angle):
        return Region(self.kind, self.n, angle)

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "angle": self.angle}

    @classmethod
    def from_dict(cls, d):
        return cls(str(d["kind"]).lower(), int(d["n"]), float(d["angle"]))


def nsector(n, omega):
    return Region(NSECTOR, n, omega)


def nstolz(n, gamma):
    return Region(NSTOLZ, n, gamma)


def tangent_points(gamma):
    """Upper and lower points where the tangents from 1 touch ``|w| = sin(gamma)``.

    The upper point is ``sin(gamma) * exp(i(pi/2 - gamma))``; the lower one is
    its conjugate ``sin(gamma) * exp(i(3pi/2 + gamma))``.
    """
    s = math.sin(gamma)
    upper = s * np.exp(1j * (math.pi / 2 - gamma))
    return complex(upper), complex(np.conj(upper))


def _cross(u, v):
    return u.real * v.imag - u.imag * v.real


def stolz_contains(gamma, z):
    """Open membership in the single Stolz domain of angle ``gamma``.

    The domain is the union of the open disc of radius ``sin(gamma)`` and the
    open triangle spanned by 1 and the two tangent points; this is exactly
    the interior of the convex hull since the chord between the tangent
    points lies inside the disc.
    """
    z = np.asarray(z, dtype=complex)
    s = math.sin(gamma)
    pu, pl = tangent_points(gamma)
    in_disc = np.abs(z) < s
    # counterclockwise triangle 1 -> pu -> pl
    c1 = _cross(pu - 1.0, z - 1.0)
    c2 = _cross(pl - pu, z - pu)
    c3 = _cross(1.0 - pl, z - pl)
    in_tri = (c1 > 0) & (c2 > 0) & (c3 > 0)
    return in_disc | in_tri


def _to_base(region, z):
    """Pull ``z`` back into each of the n base copies; shape (n, *z.shape)."""
    z = np.asarray(z, dtype=complex)
    rot = region.rotations.reshape((region.n,) + (1,) * z.ndim)
    if region.kind == NSECTOR:
        return np.conj(rot) * z
    return 1.0 - np.conj(rot) * (1.0 - z)


def contains(region, z):
    """True where ``z`` lies in the open region (vectorised over ``z``)."""
    z = np.asarray(z, dtype=complex)
    w = _to_base(region, z)
    if region.kind == NSECTOR:
        inside = (w != 0) & (np.abs(np.angle(w)) < region.angle)
    else:
        inside = stolz_contains(region.angle, w)
    out = np.any(inside, axis=0)
    return bool(out) if out.ndim == 0 else out


def contains_closed(region, z, tol=CLOSURE_TOL):
    """Membership in the closure, up to an absolute boundary tolerance."""
    inside = np.asarray(contains(region, z))
    near = np.asarray(boundary_distance(region, z)) <= tol
    out = inside | near
    return bool(out) if out.ndim == 0 else out


def _segment_distance(z, a, b):
    d = b - a
    t = np.clip(((z - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(z - (a + t * d))


def _arc_distance(z, radius, theta_start, theta_end):
    """Distance to the counterclockwise arc ``radius*exp(i t)``, t from start to end."""
    sweep = theta_end - theta_start
    rel = np.mod(np.angle(z) - theta_start, 2 * np.pi)
    on_sweep = (rel <= sweep) & (z != 0)
    radial = np.abs(np.abs(z) - radius)
    ends = np.minimum(
        np.abs(z - radius * np.exp(1j * theta_start)),
        np.abs(z - radius * np.exp(1j * theta_end)),
    )
    return np.where(on_sweep, radial, ends)


def _ray_distance(z, direction):
    t = (z * np.conj(direction)).real
    return np.where(t <= 0, np.abs(z), np.abs((z * np.conj(direction)).imag))


def boundary_distance(region, z):
    """Euclidean distance from ``z`` to the boundary of the region.

    Computed in closed form from the boundary pieces (segments, arcs, rays);
    for the unions used here the component boundaries meet only at the
    vertex, so the boundary is the union of the component boundaries.
    """
    z = np.asarray(z, dtype=complex)
    w = _to_base(region, z)
    g = region.angle
    if region.kind == NSECTOR:
        d = np.minimum(
            _ray_distance(w, np.exp(1j * g)), _ray_distance(w, np.exp(-1j * g))
        )
    else:
        pu, pl = tangent_points(g)
        d = np.minimum(_segment_distance(w, 1.0, pu), _segment_distance(w, pl, 1.0))
        d = np.minimum(
            d, _arc_distance(w, math.sin(g), math.pi / 2 - g, 3 * math.pi / 2 + g)
        )
    out = np.min(d, axis=0)
    return float(out) if out.ndim == 0 else out


def _base_stolz_boundary(gamma, m):
    s = math.sin(gamma)
    pu, pl = tangent_points(gamma)
    seg_len = abs(pu - 1.0)
    arc_len = s * (math.pi + 2 * gamma)
    total = 2 * seg_len + arc_len
    k_seg = max(2, int(round(m * seg_len / total)))
    k_arc = max(4, m - 2 * k_seg)
    t = np.linspace(0.0, 1.0, k_seg, endpoint=False)
    th = np.linspace(math.pi / 2 - gamma, 3 * math.pi / 2 + gamma, k_arc, endpoint=False)
    return np.concatenate([1.0 + t * (pu - 1.0), s * np.exp(1j * th), pl + t * (1.0 - pl)])


def boundary_points(region, m=2000, r_range=(1e-8, 1e8)):
    """Sample points on the boundary, about ``m`` per rotated component.

    For sectors the rays are sampled at log-spaced radii in ``r_range`` plus
    the vertex 0.
    """
    rot = region.rotations
    if region.kind == NSTOLZ:
        base = _base_stolz_boundary(region.angle, m)
        pts = [1.0 - c * (1.0 - base) for c in rot]
    else:
        lo, hi = r_range
        r = np.concatenate([[0.0], np.geomspace(lo, hi, max(2, m // 2))])
        e = np.exp(1j * region.angle)
        pts = [np.concatenate([c * e * r, c * np.conj(e) * r]) for c in rot]
    return np.concatenate(pts)


def sample_interior(region, m, rng=None, r_range=(1e-6, 1e6)):
    """``m`` random points of the open region.

    Stolz domains use rejection sampling from the bounding box of the base
    component; sectors draw log-uniform radii and uniform angles.
    """
    rng = np.random.default_rng(rng)
    rot = region.rotations
    g = region.angle
    if region.kind == NSTOLZ:
        s = math.sin(g)
        out = np.empty(0, dtype=complex)
        while out.size < m:
            k = 2 * (m - out.size) + 16
            w = rng.uniform(-s, 1.0, k) + 1j * rng.uniform(-s, s, k)
            out = np.concatenate([out, w[stolz_contains(g, w)]])
        w = out[:m]
        c = rot[rng.integers(region.n, size=m)]
        return 1.0 - c * (1.0 - w)
    lo, hi = r_range
    r = np.exp(rng.uniform(math.log(lo), math.log(hi), m))
    phi = rng.uniform(-g, g, m) * (1 - 1e-12)
    c = rot[rng.integers(region.n, size=m)]
    return c * r * np.exp(1j * phi)
