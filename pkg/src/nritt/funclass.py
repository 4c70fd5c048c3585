"""Rational holomorphic functions with decay certificates.

Functions are small immutable expression trees built from constants, the
identity, ``+ - * /``, integer powers and the precompositions
``z -> 1 - z`` and ``z -> r z``. Every such tree is a rational function,
which gives exact pole lists and zero orders via :meth:`HoloFn.as_rational`.

A :class:`DecayCertificate` records ``(c, s)`` together with the region it
was validated on:

* ``sector``:  ``|f(z)| <= c |z|^s / (1 + |z|^(2s))`` on an n-sector,
* ``stolz``:   ``|phi(l)| <= c |1 - l|^s`` on an n-Stolz domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import Polynomial

from .errors import CertificateError, PoleHit, Unbounded
from .regions import (
    NSECTOR,
    NSTOLZ,
    Region,
    boundary_distance,
    boundary_points,
    contains,
    sample_interior,
)

__all__ = [
    "DecayCertificate",
    "HoloFn",
    "Const",
    "Identity",
    "Poly",
    "Rational",
    "const",
    "z",
    "poly",
    "rational",
    "certify",
    "auto_certificate",
    "check_certificate",
    "sup_norm",
    "square_sup_norm",
    "decompose_polynomial",
    "substitute",
    "from_spec",
    "to_spec",
    "sector_test_family",
    "stolz_test_family",
]

POLE_TOL = 1e-30
#: samples used to validate a certificate
CERT_SAMPLES = 10_000
CERT_MARGIN = 1 + 1e-9
#: inflation applied to sampled constants when a certificate is built
AUTO_SLACK = 1.5
#: relative size below which a Taylor coefficient counts as zero
ZERO_RTOL = 1e-10


@dataclass(frozen=True)
class DecayCertificate:
    kind: str  # "sector" or "stolz"
    c: float
    s: float
    region: Region

    def __post_init__(self):
        if self.kind not in ("sector", "stolz"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        if not (self.c > 0 and self.s > 0):
            raise ValueError("certificate constants must be positive")
        want = NSECTOR if self.kind == "sector" else NSTOLZ
        if self.region.kind != want:
            raise ValueError(f"{self.kind} certificate needs a {want} region")

    def envelope(self, z):
        z = np.asarray(z, dtype=complex)
        if self.kind == "sector":
            r = np.abs(z)
            return self.c * r**self.s / (1 + r ** (2 * self.s))
        return self.c * np.abs(1 - z) ** self.s


def _poly(c):
    return Polynomial(np.asarray(c, dtype=complex))


def _trim(p):
    c = np.asarray(p.coef, dtype=complex)
    scale = np.max(np.abs(c), initial=0.0)
    nz = np.flatnonzero(np.abs(c) > ZERO_RTOL * scale) if scale > 0 else []
    if len(nz) == 0:
        return Polynomial([0j])
    return Polynomial(c[: nz[-1] + 1])


def _order_at(p, point):
    """Multiplicity of ``point`` as a zero of polynomial ``p``."""
    p = _trim(p)
    shifted = np.asarray(p(Polynomial([point, 1.0])).coef, dtype=complex)
    scale = np.max(np.abs(shifted), initial=0.0)
    if scale == 0:
        return math.inf
    return int(np.flatnonzero(np.abs(shifted) > ZERO_RTOL * scale)[0])


@dataclass(frozen=True)
class HoloFn:
    """Base node. Subclasses implement ``_eval``, ``_rational`` and ``_subst``."""

    decay: DecayCertificate | None = field(default=None, kw_only=True, compare=False)

    # evaluation -----------------------------------------------------------
    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self._eval(z)
        return complex(out) if np.ndim(out) == 0 else out

    # algebra ----------------------------------------------------------------
    def __add__(self, other):
        return Sum(self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Sum(self, Product(Const(-1.0), _lift(other)))

    def __rsub__(self, other):
        return _lift(other) - self

    def __neg__(self):
        return Product(Const(-1.0), self)

    def __mul__(self, other):
        return Product(self, _lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Quotient(self, _lift(other))

    def __rtruediv__(self, other):
        return Quotient(_lift(other), self)

    def __pow__(self, k):
        return Power(self, int(k))

    def one_minus(self):
        """``l -> self(1 - l)``; a sector certificate becomes a Stolz one."""
        g = OneMinus(self)
        cert = self.decay
        if cert is not None and cert.kind == "sector":
            # |f(1-l)| <= c|1-l|^s/(1+|1-l|^2s) <= c|1-l|^s on 1 - S, which contains B
            reg = Region(NSTOLZ, cert.region.n, cert.region.angle)
            g = replace(g, decay=DecayCertificate("stolz", cert.c, cert.s, reg))
        return g

    def dilate(self, r):
        return Dilate(self, float(r))

    def without_decay(self):
        return replace(self, decay=None)

    # rational structure -----------------------------------------------------
    def as_rational(self):
        """``(num, den)`` polynomials with ``self = num/den``."""
        num, den = self._rational()
        return _trim(num), _trim(den)

    def poles(self):
        """Poles after dropping numerically removable ones."""
        num, den = self.as_rational()
        if den.degree() < 1:
            return np.empty(0, dtype=complex)
        out = []
        for rho in np.unique(np.round(den.roots(), 12)):
            if _order_at(den, rho) > _order_at(num, rho):
                out.append(rho)
        return np.asarray(out, dtype=complex)

    def order_at(self, point):
        """Order of the zero at ``point`` (negative for a pole)."""
        num, den = self.as_rational()
        o = _order_at(num, point) - _order_at(den, point)
        return o

    def degree_at_infinity(self):
        """``deg den - deg num``: the decay order at infinity."""
        num, den = self.as_rational()
        if np.all(num.coef == 0):
            return math.inf
        return den.degree() - num.degree()

    def is_polynomial(self):
        return self.as_rational()[1].degree() == 0

    def is_zero(self):
        return bool(np.all(self.as_rational()[0].coef == 0))


def _lift(x):
    if isinstance(x, HoloFn):
        return x
    return Const(complex(x))


def _check_den(d):
    if np.any(np.abs(d) < POLE_TOL):
        raise PoleHit("evaluation at a pole")
    return d


@dataclass(frozen=True)
class Const(HoloFn):
    value: complex = 0j

    def _eval(self, z):
        return np.full(z.shape, complex(self.value))

    def _rational(self):
        return _poly([self.value]), _poly([1.0])

    def _subst(self, a, eye):
        return self.value * eye


@dataclass(frozen=True)
class Identity(HoloFn):
    def _eval(self, z):
        return z

    def _rational(self):
        return _poly([0.0, 1.0]), _poly([1.0])

    def _subst(self, a, eye):
        return a


@dataclass(frozen=True, eq=False)
class Poly(HoloFn):
    """Polynomial with ascending coefficients ``coeffs[k] * z**k``."""

    coeffs: tuple = (0j,)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in np.atleast_1d(self.coeffs)))

    def _eval(self, z):
        out = np.zeros(z.shape, dtype=complex)
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def _rational(self):
        return _poly(self.coeffs), _poly([1.0])

    def _subst(self, a, eye):
        out = np.zeros_like(eye)
        for c in reversed(self.coeffs):
            out = out @ a + c * eye
        return out


@dataclass(frozen=True, eq=False)
class Rational(HoloFn):
    """``num(z)/den(z)`` with ascending coefficient tuples."""

    num: tuple = (0j,)
    den: tuple = (1 + 0j,)

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(complex(c) for c in np.atleast_1d(self.num)))
        object.__setattr__(self, "den", tuple(complex(c) for c in np.atleast_1d(self.den)))
        if not any(self.den):
            raise ValueError("zero denominator polynomial")

    def _eval(self, z):
        return Poly(self.num)._eval(z) / _check_den(Poly(self.den)._eval(z))

    def _rational(self):
        return _poly(self.num), _poly(self.den)

    def _subst(self, a, eye):
        return np.linalg.solve(Poly(self.den)._subst(a, eye), Poly(self.num)._subst(a, eye))


@dataclass(frozen=True, eq=False)
class Sum(HoloFn):
    left: HoloFn = None
    right: HoloFn = None

    def _eval(self, z):
        return self.left._eval(z) + self.right._eval(z)

    def _rational(self):
        n1, d1 = self.left._rational()
        n2, d2 = self.right._rational()
        return n1 * d2 + n2 * d1, d1 * d2

    def _subst(self, a, eye):
        return self.left._subst(a, eye) + self.right._subst(a, eye)


@dataclass(frozen=True, eq=False)
class Product(HoloFn):
    left: HoloFn = None
    right: HoloFn = None

    def _eval(self, z):
        return self.left._eval(z) * self.right._eval(z)

    def _rational(self):
        n1, d1 = self.left._rational()
        n2, d2 = self.right._rational()
        return n1 * n2, d1 * d2

    def _subst(self, a, eye):
        return self.left._subst(a, eye) @ self.right._subst(a, eye)


@dataclass(frozen=True, eq=False)
class Quotient(HoloFn):
    left: HoloFn = None
    right: HoloFn = None

    def _eval(self, z):
        return self.left._eval(z) / _check_den(self.right._eval(z))

    def _rational(self):
        n1, d1 = self.left._rational()
        n2, d2 = self.right._rational()
        return n1 * d2, d1 * n2

    def _subst(self, a, eye):
        return np.linalg.solve(self.right._subst(a, eye), self.left._subst(a, eye))


@dataclass(frozen=True, eq=False)
class Power(HoloFn):
    base: HoloFn = None
    k: int = 1

    def _eval(self, z):
        b = self.base._eval(z)
        if self.k < 0:
            _check_den(b)
        return b**self.k

    def _rational(self):
        n, d = self.base._rational()
        if self.k >= 0:
            return n**self.k, d**self.k
        return d ** (-self.k), n ** (-self.k)

    def _subst(self, a, eye):
        b = self.base._subst(a, eye)
        if self.k >= 0:
            return np.linalg.matrix_power(b, self.k)
        return np.linalg.matrix_power(np.linalg.inv(b), -self.k)


@dataclass(frozen=True, eq=False)
class OneMinus(HoloFn):
    inner: HoloFn = None

    def _eval(self, z):
        return self.inner._eval(1.0 - z)

    def _rational(self):
        n, d = self.inner._rational()
        m = Polynomial([1.0, -1.0])
        return n(m), d(m)

    def _subst(self, a, eye):
        return self.inner._subst(eye - a, eye)


@dataclass(frozen=True, eq=False)
class Dilate(HoloFn):
    inner: HoloFn = None
    r: float = 1.0

    def _eval(self, z):
        return self.inner._eval(self.r * z)

    def _rational(self):
        n, d = self.inner._rational()
        m = Polynomial([0.0, self.r])
        return n(m), d(m)

    def _subst(self, a, eye):
        return self.inner._subst(self.r * a, eye)


def const(c):
    return Const(complex(c))


z = Identity()


def poly(coeffs):
    return Poly(tuple(coeffs))


def rational(num, den):
    return Rational(tuple(num), tuple(den))


def substitute(f, T):
    """Direct substitution ``f(T)`` through the expression tree.

    Products become matrix products, quotients and negative powers become
    linear solves. This is the textbook rational calculus and serves as an
    independent check on the contour integrals.
    """
    a = np.asarray(T, dtype=complex)
    return f._subst(a, np.eye(a.shape[0], dtype=complex))


# ---------------------------------------------------------------------------
# certificates


def _cert_samples(region, m, rng):
    k = m // 2
    pts = np.concatenate([boundary_points(region, max(k // region.n, 8)), sample_interior(region, m - k, rng)])
    if region.kind == NSECTOR:
        pts = pts[pts != 0]
    else:
        pts = pts[pts != 1]
    return pts


def check_poles(f, region):
    """Raise :class:`Unbounded` if ``f`` has a pole in the closed region."""
    p = f.poles()
    if p.size:
        bad = np.asarray(contains(region, p)) | (np.asarray(boundary_distance(region, p)) <= 1e-12)
        if np.any(bad):
            raise Unbounded(f"pole(s) {p[bad]} lie in the closed {region.kind} region")
    if region.kind == NSECTOR and f.degree_at_infinity() < 0:
        raise Unbounded("function grows at infinity on the sector")


def check_certificate(f, cert, m=CERT_SAMPLES, rng=0):
    """True if ``|f| <= envelope * (1 + 1e-9)`` on ``m`` fresh region samples."""
    pts = _cert_samples(cert.region, m, rng)
    return bool(np.all(np.abs(f(pts)) <= cert.envelope(pts) * CERT_MARGIN))


def certify(f, kind, c, s, region, samples=CERT_SAMPLES, rng=0):
    """Attach a validated certificate to ``f``; raise CertificateError on failure."""
    check_poles(f, region)
    cert = DecayCertificate(kind, float(c), float(s), region)
    if not check_certificate(f, cert, samples, rng):
        raise CertificateError(f"{kind} decay bound (c={c:g}, s={s:g}) violated on {region}")
    return replace(f, decay=cert)


def auto_certificate(f, region, s=None, samples=CERT_SAMPLES, rng=0):
    """Build, validate and attach a certificate for ``f`` on ``region``.

    The exponent defaults to the largest admissible integer: the zero order
    at 1 for Stolz regions, ``min(order at 0, decay order at infinity)`` for
    sectors. The constant is the sampled maximum ratio inflated by
    ``AUTO_SLACK``.
    """
    check_poles(f, region)
    if region.kind == NSTOLZ:
        kind = "stolz"
        s_max = f.order_at(1.0)
    else:
        kind = "sector"
        s_max = min(f.order_at(0.0), f.degree_at_infinity())
    if f.is_zero():
        s_max = 1 if s is None else s
    if s is None:
        s = s_max
    if not (0 < s <= s_max):
        raise CertificateError(f"no {kind} decay of order s={s} (max admissible {s_max})")
    pts = _cert_samples(region, samples, np.random.default_rng(rng))
    env = DecayCertificate(kind, 1.0, float(s), region).envelope(pts)
    ratio = np.max(np.abs(f(pts)) / env, initial=0.0)
    c = AUTO_SLACK * ratio if ratio > 0 else 1.0
    return certify(f, kind, c, s, region, samples, rng=np.random.default_rng(rng).integers(2**31))


# ---------------------------------------------------------------------------
# norms


@dataclass
class SupNorm:
    """Sampled supremum: a lower-bound estimate of the true sup norm."""

    value: float
    samples: int

    def __float__(self):
        return float(self.value)


def sup_norm(f, region, samples=4000):
    """Estimate ``sup |f|`` over the region from dense boundary samples.

    The maximum principle puts the supremum on the boundary (for sectors the
    boundary rays are sampled on a log scale over 16 decades).

    Raises
    ------
    Unbounded
        If a pole lies in the closed region or ``f`` grows on a sector.
    """
    check_poles(f, region)
    pts = boundary_points(region, samples)
    vals = np.abs(f(pts))
    return SupNorm(float(np.max(vals)), int(pts.size))


def square_sup_norm(family, region, samples=4000):
    """``sup_z (sum_k |g_k(z)|^2)^(1/2)`` by boundary sampling."""
    for g in family:
        check_poles(g, region)
    pts = boundary_points(region, samples)
    sq = sum(np.abs(g(pts)) ** 2 for g in family)
    return SupNorm(float(np.sqrt(np.max(sq))), int(pts.size))


def decompose_polynomial(p):
    """Split ``p(z) = (z - 1) * q(z) + p(1)`` by synthetic division.

    ``p`` is a :class:`Poly` or a sequence of ascending coefficients.
    Returns ``(q, p(1))`` with ``q`` a :class:`Poly`.
    """
    coeffs = p.coeffs if isinstance(p, Poly) else tuple(complex(c) for c in p)
    # Horner on descending coefficients; the partial sums are q's coefficients
    desc = list(reversed(coeffs))
    acc = []
    run = 0j
    for c in desc:
        run = run + c
        acc.append(run)
    p_at_1 = acc[-1]
    q_desc = acc[:-1]
    q = Poly(tuple(reversed(q_desc)) if q_desc else (0j,))
    return q, p_at_1


# ---------------------------------------------------------------------------
# test families


def sector_test_family(n, kmax=3):
    """``z^(nk) / (1 + z^n)^(2k)``, k = 1..kmax: poles sit between the sector axes."""
    zn = z**n
    return [zn**k / (1 + zn) ** (2 * k) for k in range(1, kmax + 1)]


def stolz_test_family(kmax=3, q=None):
    """``(1 - l)^k * q(l)`` for k = 1..kmax, with ``q`` pole-free on the region."""
    base = 1 - z
    q = const(1.0) if q is None else q
    return [base**k * q for k in range(1, kmax + 1)]


# ---------------------------------------------------------------------------
# JSON function specs


def _cplx_list(v):
    out = []
    for c in v:
        if isinstance(c, (list, tuple)):
            out.append(complex(c[0], c[1]))
        else:
            out.append(complex(c))
    return tuple(out)


def _json_list(cs):
    return [c.real if c.imag == 0 else [c.real, c.imag] for c in cs]


def from_spec(spec):
    """Build a HoloFn from its JSON spec.

    Coefficient lists are ascending; a complex coefficient is ``[re, im]``.
    """
    t = spec["type"]
    if t == "poly":
        return Poly(_cplx_list(spec["coeffs"]))
    if t == "rational":
        return Rational(_cplx_list(spec["num"]), _cplx_list(spec["den"]))
    if t == "compose_1minus":
        return OneMinus(from_spec(spec["inner"]))
    if t == "scale":
        return Dilate(from_spec(spec["inner"]), float(spec["r"]))
    raise ValueError(f"unknown function spec type {t!r}")


def to_spec(f):
    """JSON spec of ``f``; nodes outside the spec grammar are flattened to a rational."""
    if isinstance(f, Poly):
        return {"type": "poly", "coeffs": _json_list(f.coeffs)}
    if isinstance(f, Rational):
        return {"type": "rational", "num": _json_list(f.num), "den": _json_list(f.den)}
    if isinstance(f, OneMinus):
        return {"type": "compose_1minus", "inner": to_spec(f.inner)}
    if isinstance(f, Dilate):
        return {"type": "scale", "r": f.r, "inner": to_spec(f.inner)}
    num, den = f.as_rational()
    return {"type": "rational", "num": _json_list(num.coef), "den": _json_list(den.coef)}
