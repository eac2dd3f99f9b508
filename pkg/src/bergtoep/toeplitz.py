"""Truncated Toeplitz matrices ``T_phi[j, k] = <phi e_k, e_j>`` and commutators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bergman import BasisIndexSet, CoeffVector, basis_matrix, basis_norm_sq, eval_basis
from .domains import Domain, QuadratureRule, radial_moment
from .symbols import Symbol

__all__ = [
    "TruncatedOperator",
    "InteriorBlock",
    "NormEstimate",
    "toeplitz_entry",
    "toeplitz_matrix",
    "commutator",
    "angular_bandwidth",
    "interior_block",
    "norms",
    "two_norm",
    "apply",
]

CLOSED_FORM = "closed_form"
QUADRATURE = "quadrature"


@dataclass(frozen=True)
class TruncatedOperator:
    domain: Domain
    symbol: Symbol
    N: int
    entries: np.ndarray = field(repr=False)
    method: str = CLOSED_FORM
    rule: dict | None = None

    @property
    def index_set(self) -> BasisIndexSet:
        return BasisIndexSet(self.domain, self.N)

    @property
    def indices(self) -> np.ndarray:
        return self.index_set.indices

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            _check_compatible(self, other)
            return self.entries @ other.entries
        return self.entries @ other


def _term_entry(domain, t, j, k):
    q = t.radial_power + k + j + 1.0
    if domain.is_disk and q <= -1.0:
        raise ValueError(f"term {t} is not integrable on the disk")
    R = radial_moment(q, t.p, domain.inner_radius)
    return t.c * 2.0 * math.pi * R / math.sqrt(
        basis_norm_sq(domain, k) * basis_norm_sq(domain, j))


def _entry_closed_form(domain, s, j, k):
    return sum((_term_entry(domain, t, j, k) for t in s.terms if j == k + t.frequency), 0j)


def toeplitz_entry(domain: Domain, s: Symbol, j: int, k: int,
                   rule: QuadratureRule | None = None) -> complex:
    """Matrix element ``<s e_k, e_j>``.

    Without ``rule`` the closed form is used: a term ``c z^m zbar^n r^a log^p``
    couples ``k`` only to ``j = k + m - n``, with value
    ``2 pi c int r^(m+n+a+j+k+1) log(r)^p dr / (||z^j|| ||z^k||)``.
    """
    if domain.is_disk and (j < 0 or k < 0):
        raise ValueError("negative basis index on the disk")
    if rule is None:
        return _entry_closed_form(domain, s, j, k)
    z = rule.points
    vals = s(z) * eval_basis(domain, k, z) * np.conj(eval_basis(domain, j, z))
    return complex(np.sum(rule.weights * vals))


def toeplitz_matrix(domain: Domain, s: Symbol, N: int, method: str = CLOSED_FORM,
                    rule: QuadratureRule | None = None) -> TruncatedOperator:
    """Assemble the truncated Toeplitz matrix of ``s`` of order ``N``.

    Parameters
    ----------
    method : {'closed_form', 'quadrature'}
        Quadrature assembly needs ``rule`` and evaluates all entries as one
        weighted product ``conj(E) diag(w s) E^T`` over the nodes.
    """
    idx = BasisIndexSet(domain, N)
    if method == CLOSED_FORM:
        if domain.is_disk and not s.disk_integrable():
            raise ValueError(f"symbol {s} is not integrable on the disk")
        M = np.zeros((idx.size, idx.size), dtype=complex)
        ks = idx.indices
        for t in s.terms:
            for k in ks:
                k = int(k)
                j = k + t.frequency
                if j not in idx:
                    continue
                M[idx.offset(j), idx.offset(k)] += _term_entry(domain, t, j, k)
        meta = None
    elif method == QUADRATURE:
        if rule is None:
            raise ValueError("quadrature assembly requires a rule")
        if rule.domain != domain:
            raise ValueError("quadrature rule built for a different domain")
        E = basis_matrix(idx, rule.points)
        sw = rule.weights * s(rule.points)
        M = (np.conj(E) * sw) @ E.T
        meta = rule.metadata()
    else:
        raise ValueError(f"unknown method {method!r}")
    M.setflags(write=False)
    return TruncatedOperator(domain, s, int(N), M, method, meta)


def _check_compatible(A, B):
    if A.domain != B.domain or A.N != B.N:
        raise ValueError(
            f"operators live on different index sets ({A.domain}, N={A.N}) vs ({B.domain}, N={B.N})")


def commutator(A: TruncatedOperator, B: TruncatedOperator) -> np.ndarray:
    """``AB - BA`` by dense multiplication."""
    _check_compatible(A, B)
    return A.entries @ B.entries - B.entries @ A.entries


def angular_bandwidth(s: Symbol) -> int:
    return s.bandwidth


@dataclass(frozen=True)
class InteriorBlock:
    block: np.ndarray
    indices: np.ndarray
    margin: int

    @property
    def size(self) -> int:
        return self.indices.size


def interior_block(M, d_phi: int, d_psi: int, N: int, domain: Domain | None = None) -> InteriorBlock:
    """Sub-block of a truncated commutator unaffected by truncation.

    With bandwidths ``d_phi`` and ``d_psi`` a product can only reach indices
    at most ``d_phi + d_psi`` beyond the retained ones, so keeping indices
    ``<= N - 1 - margin`` (disk) or ``|n| <= N - margin`` (annulus) gives the
    same entries as the untruncated commutator.
    """
    M = np.asarray(M)
    margin = int(d_phi) + int(d_psi)
    domain = domain or Domain.disk()
    idx = BasisIndexSet(domain, N)
    if M.shape != (idx.size, idx.size):
        raise ValueError(f"matrix shape {M.shape} does not match {idx.size}x{idx.size}")
    if domain.is_disk:
        keep = idx.indices <= N - 1 - margin
    else:
        keep = np.abs(idx.indices) <= N - margin
    if not keep.any():
        raise ValueError(f"margin {margin} exhausts a truncation of order {N}")
    sel = np.flatnonzero(keep)
    return InteriorBlock(M[np.ix_(sel, sel)], idx.indices[sel], margin)


@dataclass(frozen=True)
class NormEstimate:
    frobenius: float
    two_norm: float
    converged: bool = True
    iterations: int = 0

    def __iter__(self):
        return iter((self.frobenius, self.two_norm))


def two_norm(M, tol=1e-10, max_iter=10000):
    """Largest singular value by power iteration on ``M^* M``.

    The start vector is fixed (all entries ``1/sqrt(dim)``) so estimates are
    reproducible.  Returns ``(estimate, converged, iterations)``.
    """
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return 0.0, True, 0
    G = M.conj().T @ M
    x = np.full(G.shape[1], 1.0 / math.sqrt(G.shape[1]), dtype=complex)
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = G @ x
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0, True, it
        lam_new = float(np.real(np.vdot(x, y)))
        x = y / ny
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            return math.sqrt(max(lam_new, 0.0)), True, it
        lam = lam_new
    return math.sqrt(max(lam, 0.0)), False, max_iter


def norms(M, tol=1e-10, max_iter=10000) -> NormEstimate:
    M = np.asarray(M)
    fro = float(np.linalg.norm(M)) if M.size else 0.0
    est, ok, its = two_norm(M, tol, max_iter)
    return NormEstimate(fro, est, ok, its)


def apply(A: TruncatedOperator, v: CoeffVector) -> CoeffVector:
    if v.index_set != A.index_set:
        raise ValueError("coefficient vector and operator use different index sets")
    return CoeffVector(v.index_set, A.entries @ v.coeffs)
