"""Orthonormal monomial bases, the Bergman projection and ``psi = f + u``.

On the disk the basis is ``e_n = z**n / ||z**n||`` for ``n >= 0``; on the
annulus ``rho < |z| < 1`` it runs over all integers (Laurent monomials), and
a truncation of order ``N`` keeps ``-N <= n <= N``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domains import Domain, QuadratureRule, radial_moment
from .symbols import Symbol, Term

__all__ = [
    "BasisIndexSet",
    "CoeffVector",
    "DecompositionResult",
    "basis_norm_sq",
    "eval_basis",
    "basis_matrix",
    "basis_rows",
    "laurent_monomial",
    "project_basis",
    "project_kernel",
    "bergman_kernel",
    "analytic_decompose",
]


@dataclass(frozen=True)
class BasisIndexSet:
    domain: Domain
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"truncation order must be a positive integer, got {self.N!r}")

    @property
    def indices(self) -> np.ndarray:
        if self.domain.is_disk:
            return np.arange(self.N)
        return np.arange(-self.N, self.N + 1)

    @property
    def size(self) -> int:
        return self.N if self.domain.is_disk else 2 * self.N + 1

    @property
    def lo(self) -> int:
        return 0 if self.domain.is_disk else -self.N

    @property
    def hi(self) -> int:
        return self.N - 1 if self.domain.is_disk else self.N

    def __contains__(self, n) -> bool:
        return self.lo <= n <= self.hi

    def offset(self, n: int) -> int:
        if n not in self:
            raise IndexError(f"basis index {n} outside {self.lo}..{self.hi}")
        return n - self.lo


def basis_norm_sq(domain: Domain, n: int) -> float:
    """``||z**n||**2`` in ``L^2(Omega, dA)``."""
    if domain.is_disk:
        if n < 0:
            raise ValueError(f"negative basis index {n} on the disk")
        return math.pi / (n + 1)
    rho = domain.rho
    if n == -1:
        return 2.0 * math.pi * math.log(1.0 / rho)
    s = 2 * n + 2
    # pi (1 - rho^s) / (n + 1), written with expm1 for accuracy near n = -1
    return -2.0 * math.pi * math.expm1(s * math.log(rho)) / s


def eval_basis(domain: Domain, n: int, point):
    """Normalised basis element ``e_n`` at ``point`` (scalar or array)."""
    z = np.asarray(point, dtype=complex)
    if not np.all(domain.contains(z)):
        raise ValueError(f"point outside {domain}")
    out = basis_rows(domain, [n], z).reshape(z.shape)
    return out if out.ndim else complex(out)


def basis_rows(domain: Domain, indices, z) -> np.ndarray:
    """Rows ``e_n(z)`` for each ``n`` in ``indices``; no domain check."""
    z = np.asarray(z, dtype=complex).ravel()
    out = np.empty((len(indices), z.size), dtype=complex)
    for row, n in enumerate(indices):
        n = int(n)
        scale = 1.0 / math.sqrt(basis_norm_sq(domain, n))
        out[row] = scale * (z ** n if n >= 0 else (1.0 / z) ** (-n))
    return out


def basis_matrix(index_set: BasisIndexSet, z) -> np.ndarray:
    return basis_rows(index_set.domain, index_set.indices, z)


def laurent_monomial(j: int, c=1.0) -> Symbol:
    """``c * z**j`` in the term grammar; ``z**-k`` is written ``zbar**k r**(-2k)``."""
    if j >= 0:
        return Symbol([Term(c, j)])
    return Symbol([Term(c, 0, -j, -2.0 * (-j))])


@dataclass(frozen=True)
class CoeffVector:
    index_set: BasisIndexSet
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (self.index_set.size,):
            raise ValueError(
                f"expected {self.index_set.size} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def domain(self) -> Domain:
        return self.index_set.domain

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeffs[self.index_set.offset(n)])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        vals = self.coeffs @ basis_matrix(self.index_set, z)
        return vals.reshape(z.shape) if z.ndim else complex(vals[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def to_symbol(self) -> Symbol:
        """The represented function as a (Laurent) polynomial symbol."""
        out = []
        for n, c in zip(self.index_set.indices, self.coeffs):
            if c != 0:
                out.extend(laurent_monomial(int(n), c / math.sqrt(basis_norm_sq(self.domain, int(n)))).terms)
        return Symbol(out)

    @classmethod
    def unit(cls, index_set: BasisIndexSet, n: int, value=1.0) -> "CoeffVector":
        c = np.zeros(index_set.size, dtype=complex)
        c[index_set.offset(n)] = value
        return cls(index_set, c)

    @classmethod
    def constant_one(cls, index_set: BasisIndexSet) -> "CoeffVector":
        """Coefficients of the constant function 1."""
        return cls.unit(index_set, 0, math.sqrt(basis_norm_sq(index_set.domain, 0)))


def _term_inner(domain: Domain, t: Term, j: int) -> complex:
    # <t, e_j>; only the frequency j = m - n survives the angular integral
    q = t.radial_power + j + 1.0
    R = radial_moment(q, t.p, domain.inner_radius)
    return t.c * 2.0 * math.pi * R / math.sqrt(basis_norm_sq(domain, j))


def project_basis(domain: Domain, g, N: int, rule: QuadratureRule | None = None) -> CoeffVector:
    """Truncated Bergman projection: coefficients ``<g, e_n>`` for the index set.

    ``g`` may be a :class:`Symbol` (closed form, term by term) or any
    vectorised callable, in which case ``rule`` is required and the inner
    products are computed by quadrature.
    """
    idx = BasisIndexSet(domain, N)
    c = np.zeros(idx.size, dtype=complex)
    if isinstance(g, Symbol):
        if domain.is_disk and not g.disk_integrable():
            raise ValueError(f"symbol {g} is not integrable on the disk")
        for t in g.terms:
            j = t.frequency
            if j in idx:
                c[idx.offset(j)] += _term_inner(domain, t, j)
        return CoeffVector(idx, c)
    if rule is None:
        raise ValueError("a quadrature rule is required for non-symbol input")
    if rule.domain != domain:
        raise ValueError("quadrature rule built for a different domain")
    E = basis_matrix(idx, rule.points)
    vals = np.asarray(g(rule.points), dtype=complex)
    vals = np.broadcast_to(vals, rule.points.shape)
    if not np.all(np.isfinite(vals)):
        i = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise ValueError(f"integrand is not finite at node {i}")
    c = np.conj(E) @ (rule.weights * vals)
    return CoeffVector(idx, c)


def bergman_kernel(z, w):
    """Reproducing kernel of the disk, ``1 / (pi (1 - z conj(w))**2)``."""
    return 1.0 / (math.pi * (1.0 - z * np.conj(w)) ** 2)


def project_kernel(g: Callable, points, rule: QuadratureRule) -> np.ndarray:
    """Disk-only projection ``(P g)(z) = int K(z, w) g(w) dA(w)`` by quadrature.

    Independent of the basis path; accuracy degrades as ``|z| -> 1`` because
    the kernel concentrates at the boundary.
    """
    if not rule.domain.is_disk:
        raise ValueError("kernel projection is only available on the disk")
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    rz = np.abs(z)
    if np.any(rz >= 1.0):
        raise ValueError("evaluation points must lie inside the disk")
    if np.any(rz > 0.95):
        warnings.warn("kernel projection near the boundary (|z| > 0.95) is inaccurate",
                      RuntimeWarning, stacklevel=2)
    w = rule.points
    gw = np.broadcast_to(np.asarray(g(w), dtype=complex), w.shape)
    K = bergman_kernel(z[:, None], w[None, :])
    return K @ (rule.weights * gw)


@dataclass(frozen=True)
class DecompositionResult:
    """``psi = f + u`` with ``f`` the truncated projection and ``u`` the rest.

    ``u`` has no basis expansion, so it is kept as the pointwise difference
    ``residual(z) = psi(z) - f(z)``.  ``u_symbol`` is the same difference
    written in the term grammar (available when ``psi`` is a Symbol).
    """

    psi: object = field(repr=False)
    f: CoeffVector
    residual_norm: float
    u_symbol: Symbol | None = None

    def residual(self, z):
        return np.asarray(self.psi(z), dtype=complex) - self.f(z)


def analytic_decompose(domain: Domain, psi, N: int, rule: QuadratureRule) -> DecompositionResult:
    f = project_basis(domain, psi, N, rule)
    u_symbol = psi - f.to_symbol() if isinstance(psi, Symbol) else None
    z = rule.points
    u = np.asarray(psi(z), dtype=complex) - f(z)
    residual_norm = math.sqrt(max(float(np.sum(rule.weights * np.abs(u) ** 2)), 0.0))
    return DecompositionResult(psi, f, residual_norm, u_symbol)
