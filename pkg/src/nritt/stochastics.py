"""Rademacher averages, R-bound and quadratic-calculus lower estimates.

For vectors ``x_1..x_N`` in ``C^d`` the Rademacher norm is

    ``||(x_k)||_Rad = (E || sum_k eps_k x_k ||^2)^(1/2)``

with independent uniform signs ``eps_k``. Up to 14 vectors the expectation
is an exact average over all ``2^N`` sign patterns; beyond that it is a
seeded Monte Carlo estimate with a reported standard error.

All estimators here return LOWER bounds for the constants they target,
together with the witness that attains them.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .funclass import square_sup_norm
from .matrixkit import vector_norm
from .regions import NSTOLZ

__all__ = [
    "EXHAUSTIVE_MAX",
    "RadNormResult",
    "BoundEstimate",
    "sign_patterns",
    "rad_norm",
    "estimate_r_bound",
    "estimate_quadratic_calculus",
]

EXHAUSTIVE_MAX = 14
MC_SAMPLES = 100_000
#: seed of the default sample stream (numpy PCG64)
DEFAULT_SEED = 20240521


@dataclass
class RadNormResult:
    value: float
    method: str  # "exhaustive" or "montecarlo"
    samples: int
    stderr: float = 0.0


def sign_patterns(N):
    """All ``2^N`` sign vectors as a ``(2^N, N)`` array of +-1."""
    return np.array(list(itertools.product((1.0, -1.0), repeat=N)))


def rad_norm(vectors, norm_kind="p2", mode="auto", samples=MC_SAMPLES, seed=DEFAULT_SEED):
    """Rademacher norm of a family of vectors (rows of ``vectors``).

    ``mode`` is ``"exhaustive"``, ``"montecarlo"`` or ``"auto"`` (exhaustive
    iff N <= 14).
    """
    x = np.atleast_2d(np.asarray(vectors, dtype=complex))
    N = x.shape[0]
    if N == 0:
        raise ValueError("need at least one vector")
    if mode == "auto":
        mode = "exhaustive" if N <= EXHAUSTIVE_MAX else "montecarlo"
    if mode == "exhaustive":
        if N > 24:
            raise ValueError(f"exhaustive enumeration of 2^{N} patterns refused")
        s = sign_patterns(N)
        nrm = vector_norm(s @ x, norm_kind)
        top = float(np.max(nrm))
        if top == 0:
            return RadNormResult(0.0, "exhaustive", s.shape[0])
        # rescale before squaring so tiny or huge inputs do not under/overflow
        return RadNormResult(top * float(np.sqrt(np.mean((nrm / top) ** 2))), "exhaustive", s.shape[0])
    if mode != "montecarlo":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    scale = float(np.max(vector_norm(x, norm_kind)))
    if scale == 0:
        return RadNormResult(0.0, "montecarlo", samples, 0.0)
    xs = x / scale
    sq = np.empty(samples)
    chunk = 8192
    for i in range(0, samples, chunk):
        k = min(chunk, samples - i)
        s = rng.choice((-1.0, 1.0), size=(k, N))
        sq[i : i + k] = vector_norm(s @ xs, norm_kind) ** 2
    value = math.sqrt(sq.mean())
    se_mean = sq.std(ddof=1) / math.sqrt(samples)
    stderr = se_mean / (2 * value) if value > 0 else 0.0
    return RadNormResult(scale * value, "montecarlo", samples, float(scale * stderr))


@dataclass
class BoundEstimate:
    C_lower: float
    witness: dict = field(default_factory=dict)
    trials: int = 0
    seed: int = DEFAULT_SEED


def _ratio(ops, idx, xs, norm_kind):
    top = rad_norm([ops[i] @ x for i, x in zip(idx, xs)], norm_kind, "exhaustive").value
    bot = rad_norm(xs, norm_kind, "exhaustive").value
    return top / bot if bot > 0 else 0.0


def _random_vectors(rng, N, d):
    return rng.standard_normal((N, d)) + 1j * rng.standard_normal((N, d))


def _refine(ops, idx, xs, norm_kind, steps=200):
    """Increase the ratio for fixed operator choices.

    For p2 the ratio is a generalised Rayleigh quotient and the block power
    step ``x_k <- T_k^* T_k x_k`` never decreases it. Other norms use a
    derivative-free search from the same start.
    """
    best = _ratio(ops, idx, xs, norm_kind)
    if norm_kind == "p2":
        x = xs.copy()
        for _ in range(steps):
            x = np.array([ops[i].conj().T @ (ops[i] @ v) for i, v in zip(idx, x)])
            scale = np.max(np.abs(x))
            if scale == 0:
                break
            x /= scale
            r = _ratio(ops, idx, x, norm_kind)
            if r <= best * (1 + 1e-14):
                best = max(best, r)
                break
            best, xs = r, x.copy()
        return best, xs
    from scipy.optimize import minimize

    shape = xs.shape

    def neg(v):
        c = v[: v.size // 2] + 1j * v[v.size // 2 :]
        return -_ratio(ops, idx, c.reshape(shape), norm_kind)

    v0 = np.concatenate([xs.real.ravel(), xs.imag.ravel()])
    res = minimize(neg, v0, method="Nelder-Mead", options={"maxiter": 400 * v0.size, "xatol": 1e-10, "fatol": 1e-12})
    if -res.fun > best:
        c = res.x[: res.x.size // 2] + 1j * res.x[res.x.size // 2 :]
        return float(-res.fun), c.reshape(shape)
    return best, xs


def estimate_r_bound(
    ops, trials=64, family_size_max=3, mode="exhaustive", seed=DEFAULT_SEED,
    max_assignments=256, refine=True, restarts=3,
):
    """Lower estimate of the R-bound of a finite operator family.

    Each trial draws a family size ``N <= family_size_max`` and random
    complex vectors ``x_1..x_N`` from a stream that does not depend on the
    operators. Every assignment of operators to the slots is then scored
    (or ``max_assignments`` seeded random ones when there are too many),
    by the ratio ``||(T_k x_k)||_Rad / ||(x_k)||_Rad``. With ``refine`` the
    best ``restarts`` candidates are improved by local ascent.

    Without refinement and with exhaustive assignments, enlarging the
    family can only increase the estimate for a fixed seed.
    """
    mats = [np.asarray(T, dtype=complex) for T in ops]
    if not mats:
        raise ValueError("empty operator family")
    norm_kind = getattr(ops[0], "norm_kind", "p2")
    d = mats[0].shape[0]
    m = len(mats)
    rng = np.random.default_rng(seed)
    cands = []
    for _ in range(trials):
        N = int(rng.integers(1, family_size_max + 1))
        xs = _random_vectors(rng, N, d)
        sub = np.random.default_rng(rng.integers(2**63))  # drawn always: keeps the x-stream fixed
        if m**N <= max_assignments:
            assigns = itertools.product(range(m), repeat=N)
        else:
            assigns = (tuple(sub.integers(m, size=N)) for _ in range(max_assignments))
        for idx in assigns:
            cands.append((_ratio(mats, idx, xs, norm_kind), idx, xs))
    cands.sort(key=lambda c: -c[0])
    best, idx, xs = cands[0]
    if refine:
        for r0, i0, x0 in cands[:restarts]:
            r, x = _refine(mats, i0, x0, norm_kind)
            if r > best:
                best, idx, xs = r, i0, x
    return BoundEstimate(float(best), {"indices": list(idx), "vectors": xs}, trials, seed)


def estimate_quadratic_calculus(
    op, region, g_family, x_samples=64, mode="exhaustive", seed=DEFAULT_SEED, alpha=None, tol=1e-10,
):
    """Lower estimate of the quadratic-calculus constant.

    Uses one vector ``x`` in every slot: the ratio is
    ``||(g_k(T) x)_k||_Rad / (||x|| * sup (sum |g_k|^2)^(1/2))``. For an
    n-Stolz region ``op`` is the n-Ritt operator and ``g_k(T)`` comes from
    the extended calculus; for an n-sector region ``op`` is the sectorial
    operator. The square-sum supremum is sampled on the region boundary.
    """
    from .calculus import apply_extended, apply_sectorial

    norm_kind = getattr(op, "norm_kind", "p2")
    gs = []
    for g in g_family:
        if g.is_zero():
            gs.append(np.zeros((op.dim, op.dim), dtype=complex))
        elif region.kind == NSTOLZ:
            gs.append(np.asarray(apply_extended(op, g, region.n, alpha=alpha, gamma=region.angle, tol=tol)))
        else:
            gs.append(np.asarray(apply_sectorial(op, g, region.n, omega=alpha, theta=region.angle, tol=tol)))
    sq = float(square_sup_norm(g_family, region))
    rng = np.random.default_rng(seed)
    d = op.dim
    best, wit = 0.0, None

    def score(x):
        nx = float(vector_norm(x, norm_kind))
        if nx == 0 or sq == 0:
            return 0.0
        top = rad_norm([G @ x for G in gs], norm_kind, mode, seed=seed).value
        return top / (nx * sq)

    for _ in range(x_samples):
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        r = score(x)
        if r > best or wit is None:
            best, wit = r, x
    if norm_kind == "p2" and sq > 0:
        # Rad norm^2 = x^* (sum G^* G) x: ascend with power steps on the Gram sum
        gram = sum(G.conj().T @ G for G in gs)
        x = wit.copy()
        for _ in range(200):
            y = gram @ x
            if not np.any(y):
                break
            x = y / np.linalg.norm(y)
            r = score(x)
            if r <= best * (1 + 1e-14):
                best = max(best, r)
                break
            best, wit = r, x.copy()
    return BoundEstimate(float(best), {"x": wit, "square_sup": sq}, x_samples, seed)
