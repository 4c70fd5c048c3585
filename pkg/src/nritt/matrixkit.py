"""Dense complex matrices as operators on C^d with a p-norm.

Spectra are never computed by a general eigensolver. An :class:`Operator`
either carries its eigenvalues (and optionally a diagonalising similarity)
from construction, is triangular (eigenvalues on the diagonal), or falls
back to a Gershgorin enclosure.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SingularResolvent

__all__ = [
    "NORM_KINDS",
    "SpectralMeta",
    "Operator",
    "ResolventSample",
    "resolvent",
    "resolvents",
    "op_norm",
    "matrix_norm",
    "vector_norm",
    "direct_sum_p",
    "gershgorin_discs",
]

NORM_KINDS = ("p1", "p2", "pinf")

#: relative pivot size below which lambda*I - T is declared singular
PIVOT_TOL = 1e-14
#: admissible max-norm residual of a resolvent solve
RESIDUAL_TOL = 1e-8
#: relative tolerance of the 2-norm power iteration
POWER_RTOL = 1e-10
POWER_MAXITER = 64
#: reconstruction tolerance for spectral metadata
META_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpectralMeta:
    eigenvalues: np.ndarray
    similarity: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", np.asarray(self.eigenvalues, dtype=complex).ravel())
        if self.similarity is not None:
            object.__setattr__(self, "similarity", np.asarray(self.similarity, dtype=complex))

    def reconstruct(self):
        V = self.similarity
        return (V * self.eigenvalues) @ np.linalg.inv(V)

    def mapped(self, fn):
        """Metadata of ``fn(T)`` for a scalar function ``fn`` (same similarity)."""
        return SpectralMeta(fn(self.eigenvalues), self.similarity)


class Operator:
    """A d x d complex matrix acting on C^d normed by ``norm_kind``.

    Parameters
    ----------
    entries : array_like, shape (d, d)
    norm_kind : {"p1", "p2", "pinf"}
    spectral : SpectralMeta, optional
        Eigenvalues, optionally with a similarity ``V`` such that
        ``entries = V diag(eigenvalues) V^-1``; checked on construction.
    """

    __array_priority__ = 20

    def __init__(self, entries, norm_kind="p2", spectral=None):
        a = np.array(entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"operator must be square, got shape {a.shape}")
        if norm_kind not in NORM_KINDS:
            raise ValueError(f"norm_kind must be one of {NORM_KINDS}")
        a.setflags(write=False)
        self._a = a
        self.norm_kind = norm_kind
        if spectral is not None:
            if spectral.eigenvalues.size != a.shape[0]:
                raise ValueError("spectral metadata has the wrong number of eigenvalues")
            if spectral.similarity is not None:
                res = np.max(np.abs(a - spectral.reconstruct()), initial=0.0)
                scale = np.max(np.abs(a), initial=0.0)
                if res > META_RTOL * max(scale, 1e-300):
                    raise ValueError(f"spectral metadata does not reconstruct entries (residual {res:.3g})")
        self.spectral = spectral

    @property
    def entries(self):
        return self._a

    @property
    def dim(self):
        return self._a.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self._a if dtype is None else self._a.astype(dtype)

    def __repr__(self):
        return f"Operator(dim={self.dim}, norm_kind={self.norm_kind!r}, spectral={self.spectral is not None})"

    @classmethod
    def from_spectrum(cls, eigenvalues, similarity=None, norm_kind="p2"):
        """``V diag(eigenvalues) V^-1`` with metadata attached (V = I by default)."""
        eig = np.asarray(eigenvalues, dtype=complex).ravel()
        V = np.eye(eig.size, dtype=complex) if similarity is None else np.asarray(similarity, dtype=complex)
        meta = SpectralMeta(eig, V)
        return cls(meta.reconstruct(), norm_kind, meta)

    @classmethod
    def identity(cls, d, norm_kind="p2"):
        return cls.from_spectrum(np.ones(d), norm_kind=norm_kind)

    def with_entries(self, entries, spectral=None):
        return Operator(entries, self.norm_kind, spectral)

    def scaled(self, r):
        meta = None if self.spectral is None else SpectralMeta(r * self.spectral.eigenvalues, self.spectral.similarity)
        return Operator(r * self._a, self.norm_kind, meta)

    def one_minus(self):
        """``I - T`` with metadata propagated."""
        meta = None if self.spectral is None else self.spectral.mapped(lambda e: 1.0 - e)
        return Operator(np.eye(self.dim) - self._a, self.norm_kind, meta)

    def is_triangular(self):
        return bool(np.all(np.tril(self._a, -1) == 0) or np.all(np.triu(self._a, 1) == 0))

    def eigenvalues(self):
        """Exactly known eigenvalues (metadata or triangular diagonal), else None."""
        if self.spectral is not None:
            return self.spectral.eigenvalues
        if self.is_triangular():
            return np.diag(self._a).copy()
        return None

    def enclosures(self):
        """Candidate spectrum enclosures as lists of ``(center, radius)`` discs."""
        eig = self.eigenvalues()
        if eig is not None:
            return [[(complex(e), 0.0) for e in eig]]
        return gershgorin_discs(self._a)

    def to_json(self):
        d = {
            "dim": self.dim,
            "re": self._a.real.tolist(),
            "im": self._a.imag.tolist(),
            "norm": self.norm_kind,
        }
        if self.spectral is not None:
            sp = {
                "eig_re": self.spectral.eigenvalues.real.tolist(),
                "eig_im": self.spectral.eigenvalues.imag.tolist(),
            }
            if self.spectral.similarity is not None:
                sp["V_re"] = self.spectral.similarity.real.tolist()
                sp["V_im"] = self.spectral.similarity.imag.tolist()
            d["spectral"] = sp
        return d

    @classmethod
    def from_json(cls, d):
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros_like(re)), dtype=float)
        a = re + 1j * im
        if "dim" in d and a.shape != (d["dim"], d["dim"]):
            raise ValueError(f"entries have shape {a.shape}, expected dim {d['dim']}")
        meta = None
        sp = d.get("spectral")
        if sp:
            eig = np.asarray(sp["eig_re"], dtype=float) + 1j * np.asarray(
                sp.get("eig_im", np.zeros(len(sp["eig_re"]))), dtype=float
            )
            V = None
            if "V_re" in sp:
                V = np.asarray(sp["V_re"], dtype=float) + 1j * np.asarray(sp.get("V_im", 0.0), dtype=float)
            meta = SpectralMeta(eig, V)
        return cls(a, d.get("norm", "p2"), meta)


@dataclass
class ResolventSample:
    lam: complex
    value: np.ndarray
    solve_residual: float


def resolvent(T, lam):
    """``(lam*I - T)^-1`` by LU with partial pivoting.

    Raises
    ------
    SingularResolvent
        If a pivot is below ``PIVOT_TOL`` times the matrix scale or the
        solve residual exceeds ``RESIDUAL_TOL``.
    """
    a = np.asarray(T)
    d = a.shape[0]
    m = lam * np.eye(d) - a
    scale = max(np.max(np.abs(m)), 1.0)
    with warnings.catch_warnings():
        # an exactly zero pivot is reported below as SingularResolvent
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < PIVOT_TOL * scale:
        raise SingularResolvent(f"lambda = {lam!r} is numerically in the spectrum")
    x = scipy.linalg.lu_solve((lu, piv), np.eye(d, dtype=complex), check_finite=False)
    res = float(np.max(np.abs(m @ x - np.eye(d))))
    if res >= RESIDUAL_TOL:
        raise SingularResolvent(f"resolvent solve at lambda = {lam!r} has residual {res:.3g}")
    return ResolventSample(complex(lam), x, res)


def resolvents(T, lams, check=True):
    """Batched resolvents, shape ``(k, d, d)``, for the quadrature hot path."""
    a = np.asarray(T)
    d = a.shape[0]
    lams = np.asarray(lams, dtype=complex).ravel()
    eye = np.eye(d, dtype=complex)
    m = lams[:, None, None] * eye - a
    try:
        x = np.linalg.solve(m, np.broadcast_to(eye, m.shape))
    except np.linalg.LinAlgError as exc:
        raise SingularResolvent("a quadrature node hit the spectrum") from exc
    if check:
        res = np.max(np.abs(m @ x - eye), axis=(1, 2))
        bad = ~(res < RESIDUAL_TOL)
        if np.any(bad):
            lam = lams[np.argmax(bad)]
            raise SingularResolvent(f"resolvent solve at lambda = {lam!r} has residual {res.max():.3g}")
    return x


def vector_norm(x, kind, axis=-1):
    x = np.abs(np.asarray(x))
    if kind == "p1":
        return x.sum(axis=axis)
    if kind == "p2":
        m = x.max(axis=axis, keepdims=True, initial=0.0)
        safe = np.where(m > 0, m, 1.0)
        return np.squeeze(safe * np.sqrt(((x / safe) ** 2).sum(axis=axis, keepdims=True)), axis=axis)
    if kind == "pinf":
        return x.max(axis=axis)
    raise ValueError(f"unknown norm kind {kind!r}")


def _spectral_norm(a):
    """Largest singular value of each matrix in a stack.

    Power iteration on ``G = A*A`` from the normalised all-ones vector, with
    ``G`` squared after every step, so step k applies ``G^(2^k)``; near-tied
    singular values then cost a few steps instead of thousands.
    """
    a = np.asarray(a, dtype=complex)
    d = a.shape[-1]
    g = np.conj(np.swapaxes(a, -1, -2)) @ a
    v = np.full(a.shape[:-1], 1.0 / np.sqrt(d), dtype=complex)
    est = np.zeros(a.shape[:-2])
    for _ in range(POWER_MAXITER):
        u = np.einsum("...ij,...j->...i", g, v)
        nu = np.sqrt(np.sum(np.abs(u) ** 2, axis=-1))
        nz = nu > 0
        v = np.where(nz[..., None], u / np.where(nz, nu, 1.0)[..., None], v)
        new = np.sqrt(np.sum(np.abs(np.einsum("...ij,...j->...i", a, v)) ** 2, axis=-1))
        done = np.abs(new - est) <= POWER_RTOL * np.maximum(new, 1e-300)
        est = np.maximum(est, new)
        if np.all(done):
            break
        g = g @ g
        gs = np.max(np.abs(g), axis=(-1, -2), keepdims=True)
        g = g / np.where(gs > 0, gs, 1.0)
    # guard against a start vector orthogonal to the top singular vector:
    # every column norm is a lower bound for the 2-norm
    col = np.sqrt(np.sum(np.abs(a) ** 2, axis=-2)).max(axis=-1)
    low = est < col * (1 - 1e-6)
    if np.any(low):
        flat_a = a.reshape((-1, d, d))
        flat = est.reshape(-1).copy()
        for i in np.flatnonzero(low.reshape(-1)):
            flat[i] = np.linalg.svd(flat_a[i], compute_uv=False)[0]
        est = flat.reshape(est.shape)
    return est


def matrix_norm(a, kind):
    """Induced p-norm of a matrix or stack of matrices."""
    a = np.asarray(a)
    if kind == "p1":
        return np.abs(a).sum(axis=-2).max(axis=-1)
    if kind == "pinf":
        return np.abs(a).sum(axis=-1).max(axis=-1)
    if kind == "p2":
        out = _spectral_norm(a)
        return float(out) if out.ndim == 0 else out
    raise ValueError(f"unknown norm kind {kind!r}")


def op_norm(T, kind=None):
    """Operator norm of ``T`` in its own norm kind (or ``kind`` if given)."""
    kind = kind or getattr(T, "norm_kind", "p2")
    return float(matrix_norm(np.asarray(T), kind))


def direct_sum_p(T, p=None):
    """``S = diag(T, 2I - T)`` on ``C^d (+)_p C^d``.

    Spectral metadata is propagated: ``sigma(S) = sigma(T) u (2 - sigma(T))``.
    """
    p = p or T.norm_kind
    a = np.asarray(T)
    d = a.shape[0]
    s = scipy.linalg.block_diag(a, 2 * np.eye(d) - a)
    meta = None
    eig = T.eigenvalues() if isinstance(T, Operator) else None
    if eig is not None:
        V = None
        if T.spectral is not None and T.spectral.similarity is not None:
            V = scipy.linalg.block_diag(T.spectral.similarity, T.spectral.similarity)
        meta = SpectralMeta(np.concatenate([eig, 2.0 - eig]), V)
    return Operator(s, p, meta)


def gershgorin_discs(a):
    """Row and column Gershgorin disc families as lists of ``(center, radius)``."""
    a = np.asarray(a)
    c = np.diag(a)
    off = np.abs(a - np.diag(c))
    rows = [(complex(z), float(r)) for z, r in zip(c, off.sum(axis=1))]
    cols = [(complex(z), float(r)) for z, r in zip(c, off.sum(axis=0))]
    return [rows, cols]
