"""Oriented boundary contours and composite Gauss-Legendre path integrals.

A :class:`Contour` is an ordered tuple of path pieces (:class:`Segment`,
:class:`Arc`, :class:`Ray`). Every piece exposes a parameter interval, a
set of initial panel breakpoints, and a vectorised ``point``/``velocity``
pair so that :func:`integrate` can treat them uniformly.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidAngle, InvalidTruncation, NoConvergence
from .regions import NSECTOR, NSTOLZ, max_angle, tangent_points

__all__ = [
    "Segment",
    "Arc",
    "Ray",
    "Contour",
    "QuadratureResult",
    "stolz_boundary",
    "sector_boundary",
    "circle",
    "integrate",
    "winding_number",
    "write_csv",
]

#: Gauss-Legendre nodes per panel
ORDER = 16
#: total integrand evaluations allowed per call
MAX_NODES = 2**20
#: hard truncation radius for sector rays without a decay certificate
DEFAULT_R_MAX = 1e3
#: smallest dyadic breakpoint used to grade rays towards the vertex
RAY_GRADING_MIN_EXP = -40


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("degenerate segment")

    domain = (0.0, 1.0)

    def breakpoints(self):
        return np.linspace(0.0, 1.0, 3)

    def point(self, t):
        return self.a + np.asarray(t) * (self.b - self.a)

    def velocity(self, t):
        return np.full(np.shape(t), self.b - self.a, dtype=complex)

    @property
    def start(self):
        return complex(self.a)

    @property
    def end(self):
        return complex(self.b)

    def reversed(self):
        return Segment(self.b, self.a)

    def moved(self, shift, rot):
        """Image under ``w -> shift + rot*w`` with ``|rot| = 1``."""
        return Segment(shift + rot * self.a, shift + rot * self.b)


@dataclass(frozen=True)
class Arc:
    """``center + radius*exp(i t)`` for t from ``theta_start`` to ``theta_end``.

    The sign of the sweep gives the direction.
    """

    center: complex
    radius: float
    theta_start: float
    theta_end: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("arc radius must be positive")
        if self.theta_start == self.theta_end:
            raise ValueError("arc with zero sweep")

    domain = (0.0, 1.0)

    def breakpoints(self):
        k = max(2, int(math.ceil(abs(self.theta_end - self.theta_start) / (math.pi / 4))))
        return np.linspace(0.0, 1.0, k + 1)

    def _theta(self, t):
        return self.theta_start + np.asarray(t) * (self.theta_end - self.theta_start)

    def point(self, t):
        return self.center + self.radius * np.exp(1j * self._theta(t))

    def velocity(self, t):
        sweep = self.theta_end - self.theta_start
        return 1j * sweep * self.radius * np.exp(1j * self._theta(t))

    @property
    def start(self):
        return complex(self.point(0.0))

    @property
    def end(self):
        return complex(self.point(1.0))

    def reversed(self):
        return Arc(self.center, self.radius, self.theta_end, self.theta_start)

    def moved(self, shift, rot):
        ang = float(np.angle(rot))
        return Arc(
            shift + rot * self.center, self.radius, self.theta_start + ang, self.theta_end + ang
        )


@dataclass(frozen=True)
class Ray:
    """``origin + r*direction`` for ``r`` in ``[r_min, r_max]``.

    ``inward=True`` traverses it from ``r_max`` down to ``r_min``. The
    parameter is the radius itself; panels are graded dyadically so that
    both the vertex and the far tail are resolved.
    """

    origin: complex
    direction: complex
    r_min: float
    r_max: float
    inward: bool = False

    def __post_init__(self):
        if not 0 <= self.r_min < self.r_max:
            raise InvalidTruncation(f"need 0 <= r_min < r_max, got {self.r_min}, {self.r_max}")
        if not math.isfinite(self.r_max):
            raise InvalidTruncation("rays must be truncated")
        object.__setattr__(self, "direction", complex(self.direction / abs(self.direction)))

    @property
    def domain(self):
        return (self.r_min, self.r_max)

    def breakpoints(self):
        lo = max(self.r_min, 2.0**RAY_GRADING_MIN_EXP)
        k0 = math.floor(math.log2(lo)) + 1
        k1 = math.ceil(math.log2(self.r_max))
        inner = [2.0**k for k in range(k0, k1) if self.r_min < 2.0**k < self.r_max]
        return np.array([self.r_min] + inner + [self.r_max])

    def point(self, r):
        return self.origin + np.asarray(r) * self.direction

    def velocity(self, r):
        d = -self.direction if self.inward else self.direction
        return np.full(np.shape(r), d, dtype=complex)

    @property
    def start(self):
        return complex(self.point(self.r_max if self.inward else self.r_min))

    @property
    def end(self):
        return complex(self.point(self.r_min if self.inward else self.r_max))

    def reversed(self):
        return Ray(self.origin, self.direction, self.r_min, self.r_max, not self.inward)

    def moved(self, shift, rot):
        return Ray(shift + rot * self.origin, rot * self.direction, self.r_min, self.r_max, self.inward)


@dataclass(frozen=True)
class Contour:
    pieces: tuple
    label: tuple = ()
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ValueError("a contour needs at least one piece")

    def __len__(self):
        return len(self.pieces)

    @property
    def start(self):
        return self.pieces[0].start

    @property
    def end(self):
        return self.pieces[-1].end

    def chain_gaps(self):
        """``|end(k) - start(k+1)|`` for consecutive pieces (and the closing gap)."""
        gaps = [abs(p.end - q.start) for p, q in zip(self.pieces, self.pieces[1:])]
        if self.closed:
            gaps.append(abs(self.end - self.start))
        return np.array(gaps)

    def reversed(self):
        return Contour(tuple(p.reversed() for p in reversed(self.pieces)), self.label, self.closed)

    def polyline(self, m=64):
        """``(piece_index, t, point)`` rows with ``m`` points per piece."""
        rows = []
        for k, p in enumerate(self.pieces):
            a, b = p.domain
            for t in np.linspace(a, b, m):
                rows.append((k, float(t), complex(p.point(t))))
        return rows


def _check_angle(n, angle, kind):
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    top = max_angle(kind, n)
    if not 0.0 < angle < top:
        raise InvalidAngle(f"{kind} angle {angle!r} not in (0, {top!r}) for n={n}")


def stolz_boundary(n, beta):
    """Counterclockwise boundary of the n-Stolz domain of angle ``beta``.

    Each component is the base triangle-plus-arc contour (segment from 1 to
    the upper tangent point, major arc, segment back to 1) moved by
    ``w -> 1 - exp(2 i j pi/n) (1 - w)``. All components start and end at 1.
    """
    _check_angle(n, beta, NSTOLZ)
    s = math.sin(beta)
    pu, pl = tangent_points(beta)
    base = (
        Segment(1.0 + 0j, pu),
        Arc(0j, s, math.pi / 2 - beta, 3 * math.pi / 2 + beta),
        Segment(pl, 1.0 + 0j),
    )
    pieces = []
    for j in range(n):
        c = complex(np.exp(2j * math.pi * j / n))
        pieces.extend(p.moved(1.0 - c, c) for p in base)
    return Contour(tuple(pieces), ("stolz", int(n), float(beta)), closed=True)


def sector_boundary(n, nu, r_max=DEFAULT_R_MAX):
    """Boundary of the n-sector of angle ``nu``, truncated at ``r_max``.

    For every j: ray in along angle ``2 j pi/n + nu``, then ray out along
    ``2 j pi/n - nu``. The pieces of different j join only at infinity.
    """
    _check_angle(n, nu, NSECTOR)
    if not r_max > 0:
        raise InvalidTruncation(f"r_max must be positive, got {r_max!r}")
    pieces = []
    for j in range(n):
        c = np.exp(2j * math.pi * j / n)
        pieces.append(Ray(0j, c * np.exp(1j * nu), 0.0, r_max, inward=True))
        pieces.append(Ray(0j, c * np.exp(-1j * nu), 0.0, r_max, inward=False))
    return Contour(tuple(pieces), ("sector", int(n), float(nu), float(r_max)), closed=False)


def circle(center=0j, radius=1.0, arcs=4):
    """Counterclockwise circle split into ``arcs`` equal arcs."""
    th = np.linspace(0.0, 2 * math.pi, arcs + 1)
    pieces = tuple(Arc(center, radius, th[k], th[k + 1]) for k in range(arcs))
    return Contour(pieces, ("circle", complex(center), float(radius)), closed=True)


@dataclass
class QuadratureResult:
    value: object
    nodes: int
    error: float
    panels: int = field(default=0)


_GL_CACHE = {}


def _gauss_legendre(order):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def _panel_nodes(piece, a, b, x, w):
    half = 0.5 * (b - a)
    t = 0.5 * (a + b) + half * x
    return piece.point(t), half * w * piece.velocity(t)


def integrate(contour, integrand, tol=1e-10, order=ORDER, max_nodes=MAX_NODES, full_output=False):
    """Integral of ``integrand(lam) dlam`` along ``contour``.

    Composite Gauss-Legendre with dyadic panel refinement. Every panel keeps
    its own value and the sum of its two halves; their difference (max-norm)
    is the panel error. Panels carrying more than their share of the error
    budget are halved until the summed error drops below ``tol``.

    Parameters
    ----------
    contour : Contour
    integrand : callable
        Vectorised: maps a 1-d complex array of k nodes to an array of shape
        ``(k,)`` or ``(k, ...)``.
    tol : float
        Absolute tolerance on the summed panel errors.
    full_output : bool
        If True return a :class:`QuadratureResult` instead of the value.

    Raises
    ------
    NoConvergence
        If ``max_nodes`` integrand evaluations do not reach ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    x, w = _gauss_legendre(order)

    # panel records: [piece_index, a, b, value, left, right]
    def evaluate(intervals):
        """Return GL values on each interval of ``intervals`` (one batched call)."""
        pts, wts = [], []
        for k, a, b in intervals:
            p, q = _panel_nodes(contour.pieces[k], a, b, x, w)
            pts.append(p)
            wts.append(q)
        pts = np.concatenate(pts)
        wts = np.concatenate(wts)
        vals = np.asarray(integrand(pts))
        vals = vals * wts.reshape((-1,) + (1,) * (vals.ndim - 1))
        vals = vals.reshape((len(intervals), order) + vals.shape[1:])
        return vals.sum(axis=1), pts.size

    def make(intervals, values=None):
        # value of each interval plus its halves
        halves = []
        for k, a, b in intervals:
            m = 0.5 * (a + b)
            halves += [(k, a, m), (k, m, b)]
        if values is None:
            values, used = evaluate(intervals + halves)
            hv = values[len(intervals):]
            values = values[: len(intervals)]
        else:
            hv, used = evaluate(halves)
        out = []
        for i, (k, a, b) in enumerate(intervals):
            out.append([k, a, b, values[i], hv[2 * i], hv[2 * i + 1]])
        return out, used

    initial = []
    for k, piece in enumerate(contour.pieces):
        bp = piece.breakpoints()
        initial += [(k, float(bp[i]), float(bp[i + 1])) for i in range(len(bp) - 1)]
    panels, nodes = make(initial)

    def err_of(rec):
        d = np.abs(rec[4] + rec[5] - rec[3])
        return float(np.max(d)) if np.ndim(d) else float(d)

    errs = np.array([err_of(r) for r in panels])
    while errs.sum() >= tol:
        share = tol / (2 * len(panels))
        split = errs > share
        if nodes + 2 * order * 2 * int(split.sum()) > max_nodes:
            raise NoConvergence(
                f"quadrature did not reach tol={tol:g} within {max_nodes} nodes "
                f"(error estimate {errs.sum():.3g}); a pole may be too close to the contour",
                nodes=nodes,
                error=float(errs.sum()),
            )
        keep = [r for r, s in zip(panels, split) if not s]
        kids, kid_vals = [], []
        for r, s in zip(panels, split):
            if s:
                k, a, b = r[0], r[1], r[2]
                m = 0.5 * (a + b)
                kids += [(k, a, m), (k, m, b)]
                kid_vals += [r[4], r[5]]
        new, used = make(kids, values=kid_vals)
        nodes += used
        panels = keep + new
        errs = np.array([err_of(r) for r in panels])

    # fixed summation order: by piece, then by parameter
    panels.sort(key=lambda r: (r[0], r[1]))
    value = sum(r[4] + r[5] for r in panels)
    if full_output:
        return QuadratureResult(value, nodes, float(errs.sum()), len(panels))
    return value


def winding_number(contour, z, tol=1e-10):
    """``(1/2 pi i) * integral of dlam / (lam - z)`` by :func:`integrate`."""
    val = integrate(contour, lambda lam: 1.0 / (lam - z), tol=tol)
    return complex(val / (2j * math.pi))


def write_csv(contour, fh, m=64):
    """Write the contour as a polyline: columns piece_index, t, re, im."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["piece_index", "t", "re", "im"])
    for k, t, p in contour.polyline(m):
        writer.writerow([k, repr(t), repr(p.real), repr(p.imag)])
