"""Contour-integral functional calculi for n-Ritt and n-sectorial matrices.

``phi(T)`` for an n-Ritt ``T`` is the Cauchy integral of ``phi(l) R(l, T)``
over the counterclockwise boundary of the n-Stolz domain of angle ``beta``;
``f(A)`` for an n-sectorial ``A`` integrates ``f(z) R(z, A)`` over the
boundary of the n-sector of angle ``nu``. Both carry the ``1/(2 pi i)``
prefactor, so polynomials and rationals agree with direct substitution.

Angle conventions (all below ``max_angle``: ``pi/n`` for sectors, and
``min(pi/n, pi/2)`` for Stolz domains):

``alpha`` / ``omega``
    type of the operator: the spectrum sits in the closed region of this angle;
``gamma`` / ``theta``
    aperture on which the function is certified;
``beta`` / ``nu``
    contour aperture, strictly between the two (default: the midpoint).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import contours
from .errors import CertificateError, InvalidAngle, NotClassifiable, SingularResolvent
from .funclass import (
    HoloFn,
    Poly,
    auto_certificate,
    check_poles,
    decompose_polynomial,
    sup_norm,
    z as _z,
)
from .matrixkit import Operator, matrix_norm, op_norm, resolvents
from .regions import (
    NSECTOR,
    NSTOLZ,
    Region,
    boundary_distance,
    contains,
    contains_closed,
    max_angle,
)

__all__ = [
    "CalculusReport",
    "CalculusNormEstimate",
    "RLimitReport",
    "TransferResult",
    "angle_grid",
    "type_angle",
    "classify_ritt",
    "classify_sectorial",
    "apply_ritt",
    "apply_sectorial",
    "apply_extended",
    "approximate_r_limit",
    "transfer_check",
    "estimate_calculus_norm",
    "spectral_oracle",
]

#: number of type angles tried by default
GRID_SIZE = 64
#: boundary-offset shells used when sampling resolvent bounds
SHELL_OFFSETS = (1e-1, 1e-2, 1e-3, 1e-4)
FAR_FIELD = (2.0, 10.0, 100.0)
DEFAULT_DENSITY = 32
#: tolerance for eigenvalues sitting exactly on a closed-region boundary
SPECTRUM_TOL = 1e-12


def angle_grid(n, m=GRID_SIZE, kind=NSTOLZ):
    """``m`` equally spaced angles strictly inside ``(0, max_angle(kind, n))``."""
    return np.arange(1, m + 1) * max_angle(kind, n) / (m + 1)


def _as_operator(T):
    return T if isinstance(T, Operator) else Operator(T)


def _disc_in_closure(region, center, radius):
    if radius == 0:
        return bool(contains_closed(region, center, SPECTRUM_TOL))
    return bool(contains(region, center)) and boundary_distance(region, center) >= radius


def _vertex(kind):
    return 1.0 if kind == NSTOLZ else 0.0


def _disc_inside_open(region, center, radius):
    """Disc inside the open region, except that a point disc may sit at the vertex."""
    if radius == 0:
        if abs(center - _vertex(region.kind)) <= SPECTRUM_TOL:
            return True
        return bool(contains(region, center))
    return bool(contains(region, center)) and boundary_distance(region, center) > radius


def type_angle(T, kind, n, grid=None):
    """Smallest grid angle whose closed region holds a spectrum enclosure.

    Every enclosure the operator offers (exact eigenvalues, or the row and
    column Gershgorin families) is tried; the best one wins. Returns None if
    no grid angle works.
    """
    T = _as_operator(T)
    grid = angle_grid(n, kind=kind) if grid is None else np.sort(np.asarray(grid, dtype=float))
    best = None
    for discs in T.enclosures():
        for a in grid:
            reg = Region(kind, n, a)
            if all(_disc_in_closure(reg, c, r) for c, r in discs):
                if best is None or a < best:
                    best = float(a)
                break
    return best


def _spectrum_inside(T, region):
    return any(all(_disc_inside_open(region, c, r) for c, r in discs) for discs in T.enclosures())


# ---------------------------------------------------------------------------
# classification


@dataclass
class CalculusReport:
    kind: str
    n: int
    type_angle: float
    resolvent_bound: float
    admissible: bool
    grid_spec: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "kind": self.kind,
            "n": self.n,
            "admissible": self.admissible,
            "type_angle": self.type_angle,
            "resolvent_bound": self.resolvent_bound,
            "grid": self.grid_spec,
        }


def _outward_samples(contour, density, kind):
    """Boundary points and unit outward normals (region lies left of travel)."""
    pts, normals = [], []
    for piece in contour.pieces:
        if isinstance(piece, contours.Ray):
            t = np.geomspace(1e-4, 1e4, density)
        else:
            a, b = piece.domain
            t = np.linspace(a, b, density + 2)[1:-1]
        v = piece.velocity(t)
        pts.append(piece.point(t))
        normals.append(-1j * v / np.abs(v))
    return np.concatenate(pts), np.concatenate(normals)


def shell_points(region, density=DEFAULT_DENSITY, offsets=SHELL_OFFSETS, far=FAR_FIELD):
    """Sample points outside the closed region.

    Boundary points pushed outward by each offset, plus circles of the
    far-field radii; anything landing in (or too near) the closure is dropped.
    """
    if region.kind == NSTOLZ:
        contour = contours.stolz_boundary(region.n, region.angle)
    else:
        contour = contours.sector_boundary(region.n, region.angle, 1e4)
    w, nrm = _outward_samples(contour, density, region.kind)
    lams = [w + d * nrm for d in offsets]
    th = 2 * math.pi * (np.arange(density * region.n) + 0.5) / (density * region.n)
    lams += [R * np.exp(1j * th) for R in far]
    lams = np.concatenate(lams)
    keep = ~np.asarray(contains(region, lams)) & (
        np.asarray(boundary_distance(region, lams)) >= 0.5 * min(offsets)
    )
    return lams[keep]


def _resolvent_bound(T, region, density, ritt, scale_fn=None):
    lams = shell_points(region, density)
    a = np.asarray(T)
    try:
        R = resolvents(a, lams, check=False)
    except SingularResolvent:
        return math.inf
    if not np.all(np.isfinite(R)):
        return math.inf
    w = (lams - 1.0) if ritt else lams
    vals = matrix_norm(w[:, None, None] * R, T.norm_kind)
    return float(np.max(vals))


def _classify(T, kind, n, grid, density, ritt):
    T = _as_operator(T)
    grid = angle_grid(n, kind=kind) if grid is None else np.sort(np.asarray(grid, dtype=float))
    alpha = type_angle(T, kind, n, grid)
    if alpha is None:
        raise NotClassifiable(
            f"spectrum enclosure is not contained in the closed {kind} region "
            f"of angle {grid[-1]:.6g} (n={n})"
        )
    betas = grid[grid > alpha]
    bounds = {}
    admissible = betas.size > 0
    for b in betas:
        val = _resolvent_bound(T, Region(kind, n, b), density, ritt)
        bounds[float(b)] = val
        if not math.isfinite(val):
            admissible = False
    sup = max(bounds.values()) if bounds else math.inf
    spec = {
        "angles": [float(g) for g in grid],
        "betas": list(bounds),
        "bounds": list(bounds.values()),
        "density": int(density),
        "offsets": list(SHELL_OFFSETS),
        "far_field": list(FAR_FIELD),
    }
    return CalculusReport(kind, n, alpha, sup, bool(admissible), spec)


def classify_ritt(T, n=1, angle_grid=None, density=DEFAULT_DENSITY):
    """Classify ``T`` as n-Ritt on a grid of angles.

    The type angle is the smallest grid angle whose closed n-Stolz domain
    holds the spectrum enclosure. For every larger grid angle ``beta`` the
    quantity ``||(l - 1) R(l, T)||`` is sampled on boundary-offset shells
    and far-field circles outside the closed domain; ``resolvent_bound`` is
    the largest sampled value. Boundedness is only ever observed on these
    samples, never proved.

    Raises
    ------
    NotClassifiable
        If the enclosure escapes the largest grid angle.
    """
    return _classify(T, NSTOLZ, n, angle_grid, density, ritt=True)


def classify_sectorial(A, n=1, angle_grid=None, density=DEFAULT_DENSITY):
    """Sectorial counterpart of :func:`classify_ritt`, sampling ``||z R(z, A)||``."""
    return _classify(A, NSECTOR, n, angle_grid, density, ritt=False)


# ---------------------------------------------------------------------------
# calculi


def _resolve_angles(T, f, kind, n, alpha, gamma, beta):
    if alpha is None:
        alpha = type_angle(T, kind, n)
        if alpha is None:
            raise NotClassifiable(f"no {kind} type angle found for the operator (n={n})")
    if gamma is None:
        cert = f.decay
        want = "stolz" if kind == NSTOLZ else "sector"
        if cert is not None and cert.kind == want and cert.region.n == n and cert.region.angle > alpha:
            gamma = cert.region.angle
        else:
            gamma = 0.5 * (alpha + max_angle(kind, n))
    if beta is None:
        beta = 0.5 * (alpha + gamma)
    if not 0 < alpha < beta < gamma < max_angle(kind, n):
        raise InvalidAngle(
            f"need 0 < alpha < beta < gamma < {max_angle(kind, n):.6g}, "
            f"got {alpha:.6g}, {beta:.6g}, {gamma:.6g} (n={n})"
        )
    return float(alpha), float(gamma), float(beta)


def _certified(f, region):
    """Return ``f`` with a certificate of the right kind valid on ``region``."""
    check_poles(f, region)
    want = "stolz" if region.kind == NSTOLZ else "sector"
    cert = f.decay
    if cert is not None and cert.kind == want and cert.region.n == region.n and cert.region.angle >= region.angle:
        return f
    return auto_certificate(f, region)


@dataclass
class CalculusInfo:
    nodes: int
    error: float
    angles: tuple
    r_max: float | None = None


def apply_ritt(T, phi, n=1, alpha=None, gamma=None, beta=None, tol=1e-10, full_output=False):
    """``phi(T) = (1/2 pi i) * integral of phi(l) R(l, T) dl`` over the n-Stolz boundary.

    Parameters
    ----------
    T : Operator or array_like
    phi : HoloFn
        Must decay at 1 (``|phi(l)| <= c |1 - l|^s``); a certificate is built
        on the n-Stolz domain of angle ``gamma`` if ``phi`` has none.
    n : int
    alpha, gamma, beta : float, optional
        Type, certificate and contour angles; see the module docstring.
    tol : float
        Absolute quadrature tolerance on the result.
    full_output : bool
        Also return a :class:`CalculusInfo` with node count and angles.

    Raises
    ------
    Unbounded
        ``phi`` has a pole in the closed domain of angle ``gamma``.
    CertificateError
        ``phi`` does not vanish at 1; use :func:`apply_extended`.
    NotClassifiable, InvalidAngle, NoConvergence, SingularResolvent
    """
    T = _as_operator(T)
    alpha, gamma, beta = _resolve_angles(T, phi, NSTOLZ, n, alpha, gamma, beta)
    phi = _certified(phi, Region(NSTOLZ, n, gamma))
    if not _spectrum_inside(T, Region(NSTOLZ, n, beta)):
        raise NotClassifiable(f"spectrum enclosure not strictly inside the contour (beta={beta:.6g})")
    a = np.asarray(T)

    def integrand(lams):
        return phi(lams)[:, None, None] * resolvents(a, lams)

    res = contours.integrate(
        contours.stolz_boundary(n, beta), integrand, tol=2 * math.pi * tol, full_output=True
    )
    out = T.with_entries(res.value / (2j * math.pi))
    if full_output:
        return out, CalculusInfo(res.nodes, res.error / (2 * math.pi), (alpha, beta, gamma))
    return out


def _sector_r_max(A, cert, n, tol):
    # for |z| >= 2||A||, ||z R(z, A)|| <= 2, and c r^s/(1+r^2s) <= c r^-s, so the
    # discarded tail over 2n rays is at most 2n * 2c R^-s / (2 pi s)
    c, s = cert.c, cert.s
    r_tail = (40.0 * n * c / (2 * math.pi * s * tol)) ** (1.0 / s)
    return float(min(max(r_tail, 2.0 * op_norm(A), 1.0), 1e30))


def apply_sectorial(A, f, n=1, omega=None, theta=None, nu=None, tol=1e-10, full_output=False):
    """``f(A) = (1/2 pi i) * integral of f(z) R(z, A) dz`` over the n-sector boundary.

    The rays are truncated at a radius chosen from the decay certificate so
    the neglected tail is below ``tol/10``. Arguments mirror
    :func:`apply_ritt` with ``omega < nu < theta``.
    """
    A = _as_operator(A)
    omega, theta, nu = _resolve_angles(A, f, NSECTOR, n, omega, theta, nu)
    f = _certified(f, Region(NSECTOR, n, theta))
    if not _spectrum_inside(A, Region(NSECTOR, n, nu)):
        raise NotClassifiable(f"spectrum enclosure not strictly inside the contour (nu={nu:.6g})")
    r_max = _sector_r_max(A, f.decay, n, tol)
    a = np.asarray(A)

    def integrand(zs):
        return f(zs)[:, None, None] * resolvents(a, zs)

    res = contours.integrate(
        contours.sector_boundary(n, nu, r_max), integrand, tol=2 * math.pi * tol * 0.9, full_output=True
    )
    out = A.with_entries(res.value / (2j * math.pi))
    if full_output:
        return out, CalculusInfo(res.nodes, res.error / (2 * math.pi), (omega, nu, theta), r_max)
    return out


def _split_constant(psi):
    """``psi = c + phi`` with ``phi(1) = 0``; polynomials use synthetic division."""
    if isinstance(psi, Poly):
        q, c = decompose_polynomial(psi)
        return c, (_z - 1) * q
    num, den = psi.as_rational()
    if den(1.0) == 0:
        raise CertificateError("psi has a pole at 1")
    c = complex(psi(1.0))
    return c, psi - c


def apply_extended(T, psi, n=1, alpha=None, gamma=None, beta=None, tol=1e-10, full_output=False):
    """``psi(T) = c I + phi(T)`` for ``psi = c + phi`` with ``phi`` decaying at 1.

    ``c`` is ``psi(1)``. Polynomials are split by synthetic division, so this
    is the route that reproduces ordinary polynomial evaluation.
    """
    T = _as_operator(T)
    c, phi = _split_constant(psi)
    eye = np.eye(T.dim)
    if phi.is_zero():
        out = T.with_entries(c * eye)
        if full_output:
            return out, CalculusInfo(0, 0.0, (alpha, beta, gamma))
        return out
    res = apply_ritt(T, phi, n, alpha, gamma, beta, tol, full_output)
    body, info = res if full_output else (res, None)
    out = T.with_entries(c * eye + np.asarray(body))
    return (out, info) if full_output else out


# ---------------------------------------------------------------------------
# r -> 1 and transference


@dataclass
class RLimitReport:
    rows: list  # (r, ||phi(rT) - phi(T)||)
    uniform_bound: float
    reference: Operator


def approximate_r_limit(T, phi, r_sequence, n=1, alpha=None, gamma=None, beta=None, tol=1e-10, density=16):
    """Deviations ``||phi(rT) - phi(T)||`` along ``r_sequence``.

    The same contour angles are used for every ``r``. Also samples
    ``sup ||(l - 1) R(l, rT)||`` over the r values and the resolvent shells
    outside the closed domain of angle ``beta``, the uniform bound behind
    ``phi(rT) -> phi(T)``.
    """
    T = _as_operator(T)
    alpha, gamma, beta = _resolve_angles(T, phi, NSTOLZ, n, alpha, gamma, beta)
    ref = apply_ritt(T, phi, n, alpha, gamma, beta, tol)
    rows = []
    bound = _resolvent_bound(T, Region(NSTOLZ, n, beta), density, ritt=True)
    for r in r_sequence:
        if r == 1:
            rows.append((1.0, 0.0))
            continue
        if not 0 < r < 1:
            raise ValueError(f"r must lie in (0, 1], got {r!r}")
        rT = T.scaled(r)
        val = apply_ritt(rT, phi, n, alpha, gamma, beta, tol)
        rows.append((float(r), op_norm(np.asarray(val) - np.asarray(ref), T.norm_kind)))
        bound = max(bound, _resolvent_bound(rT, Region(NSTOLZ, n, beta), density, ritt=True))
    return RLimitReport(rows, bound, ref)


@dataclass
class TransferResult:
    lhs: Operator
    rhs: Operator
    deviation: float


def transfer_check(T, f, n=1, alpha=None, gamma=None, beta=None, tol=1e-10):
    """Compare ``f(I - T)`` (sector calculus) with ``phi(T)``, ``phi(l) = f(1 - l)``.

    Both sides use the same angles: the sector contour at ``beta`` for
    ``A = I - T`` and the n-Stolz contour at ``beta`` for ``T``.
    """
    T = _as_operator(T)
    if alpha is None:
        alpha = type_angle(T, NSTOLZ, n)
        if alpha is None:
            raise NotClassifiable(f"no n-Ritt type angle found (n={n})")
    if gamma is None:
        cert = f.decay
        if cert is not None and cert.kind == "sector" and cert.region.n == n and cert.region.angle > alpha:
            gamma = cert.region.angle
        else:
            gamma = 0.5 * (alpha + max_angle(NSTOLZ, n))
    if beta is None:
        beta = 0.5 * (alpha + gamma)
    f = _certified(f, Region(NSECTOR, n, gamma))
    phi = f.one_minus()
    A = T.one_minus()
    lhs = apply_sectorial(A, f, n, alpha, gamma, beta, tol)
    rhs = apply_ritt(T, phi, n, alpha, gamma, beta, tol)
    dev = op_norm(np.asarray(lhs) - np.asarray(rhs), T.norm_kind)
    return TransferResult(lhs, rhs, dev)


# ---------------------------------------------------------------------------
# calculus norm


@dataclass
class CalculusNormEstimate:
    K_lower: float
    witness: HoloFn
    family_size: int
    K_poly_lower: float | None = None
    ratios: list = field(default_factory=list)


def estimate_calculus_norm(T, region, family, alpha=None, tol=1e-10):
    """Largest ratio ``||phi(T)|| / sup|phi|`` over a function family.

    For an n-Stolz region the extended calculus is used (so constants and
    polynomials are allowed); for an n-sector region ``T`` is read as the
    sectorial operator itself. ``K_poly_lower`` repeats the maximum over the
    polynomial members only. Both numbers are lower bounds for the calculus
    constant on this region.
    """
    T = _as_operator(T)
    if not family:
        raise ValueError("empty function family")
    ratios = []
    for f in family:
        if region.kind == NSTOLZ:
            val = apply_extended(T, f, region.n, alpha=alpha, gamma=region.angle, tol=tol)
        else:
            val = apply_sectorial(T, f, region.n, omega=alpha, theta=region.angle, tol=tol)
        num = op_norm(val)
        den = float(sup_norm(f, region))
        ratios.append(num / den if den > 0 else (0.0 if num == 0 else math.inf))
    k = int(np.argmax(ratios))
    polys = [r for f, r in zip(family, ratios) if f.is_polynomial()]
    return CalculusNormEstimate(
        float(ratios[k]), family[k], len(family), float(max(polys)) if polys else None, ratios
    )


def spectral_oracle(T, f):
    """``V diag(f(eigs)) V^-1`` from the operator's spectral metadata."""
    meta = T.spectral
    if meta is None or meta.similarity is None:
        raise ValueError("operator carries no diagonalising similarity")
    V = meta.similarity
    return (V * f(meta.eigenvalues)) @ np.linalg.inv(V)
