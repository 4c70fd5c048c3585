"""Diagonal Schauder multipliers, the I_theta integral, Carleson products.

Multipliers act on the standard basis of C^d: ``T_gamma = diag(gamma)``.
For an increasing sequence in ``[0, 1)`` the resolvent on the unit circle
is again a multiplier, with symbol ``gamma(theta)_m = 1/(e^{i theta} - gamma_m)``
whose total variation is at most

    ``I_theta = integral_0^1 dt / |e^{i theta} - t|^2 = (pi - |theta|) / (2 sin|theta|)``.
"""
from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .matrixkit import Operator, op_norm, resolvent

__all__ = [
    "BVSequence",
    "multiplier",
    "resolvent_symbol",
    "i_theta",
    "ProfileRow",
    "ritt_bound_profile",
    "carleson_delta",
    "carleson_delta_min",
    "sequence_from_rule",
]


@dataclass(frozen=True, eq=False)
class BVSequence:
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex).ravel())

    def __len__(self):
        return self.values.size

    @property
    def bv_norm(self):
        return float(np.sum(np.abs(np.diff(self.values))))

    def is_increasing_real(self):
        v = self.values
        return bool(np.all(v.imag == 0) and np.all(np.diff(v.real) >= 0))


def multiplier(gamma, norm_kind="p2"):
    """The diagonal multiplier ``diag(gamma)`` with its spectrum attached."""
    g = gamma if isinstance(gamma, BVSequence) else BVSequence(gamma)
    return Operator.from_spectrum(g.values, norm_kind=norm_kind)


def resolvent_symbol(gamma, theta):
    """The sequence ``1/(e^{i theta} - gamma_m)`` of ``R(e^{i theta}, T_gamma)``."""
    g = gamma if isinstance(gamma, BVSequence) else BVSequence(gamma)
    return BVSequence(1.0 / (np.exp(1j * theta) - g.values))


def i_theta(theta):
    """``integral_0^1 dt / |e^{i theta} - t|^2`` in closed form.

    Even in ``theta``; at ``|theta| = pi`` the integral is ``1/2``, the limit
    of the closed form there.

    Raises
    ------
    DomainError
        For ``theta = 0`` (divergent) or ``|theta| > pi``.
    """
    a = abs(float(theta))
    if a == 0 or a > math.pi:
        raise DomainError(f"theta must lie in (-pi, 0) u (0, pi], got {theta!r}")
    if a == math.pi:
        return 0.5
    return (math.pi - a) / (2.0 * math.sin(a))


@dataclass
class ProfileRow:
    theta: float
    actual: float  # ||(e^{i theta} - 1) R(e^{i theta}, T_gamma)||
    profile: float  # |e^{i theta} - 1| I_theta
    bound: float  # |e^{i theta} - 1| (|gamma(theta)_0| + I_theta)


def ritt_bound_profile(gamma, theta_grid, norm_kind="p2"):
    """Resolvent quantity on the unit circle next to its variation bound.

    ``bound`` uses ``sup_m |a_m| <= |a_0| + ||a||_BV`` for the resolvent
    symbol ``a = gamma(theta)``, whose variation is at most ``I_theta``.
    """
    g = gamma if isinstance(gamma, BVSequence) else BVSequence(gamma)
    v = g.values
    if not (g.is_increasing_real() and np.all(v.real >= 0) and np.all(v.real < 1)):
        raise DomainError("gamma must be real, increasing and in [0, 1)")
    T = multiplier(g, norm_kind)
    rows = []
    for th in theta_grid:
        lam = np.exp(1j * th)
        R = resolvent(T, lam).value
        actual = op_norm(Operator((lam - 1) * R, norm_kind))
        it = i_theta(th)
        head = abs(1.0 / (lam - v[0]))
        rows.append(ProfileRow(float(th), float(actual), float(abs(lam - 1) * it), float(abs(lam - 1) * (head + it))))
    return rows


def _check_points(points):
    p = np.asarray(points, dtype=complex).ravel()
    if np.any(p.real <= 0):
        raise DomainError("Carleson points must have positive real part")
    if np.unique(p).size != p.size:
        raise DomainError("Carleson points must be pairwise distinct")
    return p


def carleson_delta(points, j):
    """``prod_{i != j} |(z_i - z_j) / (z_i + z_j)|`` for points in the right half-plane."""
    p = _check_points(points)
    zj = p[j]
    others = np.delete(p, j)
    return float(np.prod(np.abs((others - zj) / (others + zj))))


def carleson_delta_min(points):
    """Minimum of :func:`carleson_delta` over all indices (the separation constant)."""
    p = _check_points(points)
    return min(carleson_delta(p, j) for j in range(p.size))


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _eval_rule(node, n):
    if isinstance(node, ast.Expression):
        return _eval_rule(node.body, n)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "n":
        return float(n)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_rule(node.left, n), _eval_rule(node.right, n))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_rule(node.operand, n)
        return -v if isinstance(node.op, ast.USub) else v
    raise ValueError(f"unsupported syntax in sequence rule: {ast.dump(node)}")


def sequence_from_rule(rule, dim):
    """Evaluate an arithmetic rule in ``n`` (``^`` means power) for n = 0..dim-1.

    >>> sequence_from_rule("1-2^-n", 3).values.real
    array([0.  , 0.5 , 0.75])
    """
    tree = ast.parse(rule.replace("^", "**"), mode="eval")
    return BVSequence([_eval_rule(tree, n) for n in range(dim)])
