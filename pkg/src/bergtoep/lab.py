"""Named experiments on truncated Toeplitz operators.

Each ``run_*`` function is pure given its inputs and returns an
:class:`ExperimentReport` whose verdict is a deterministic function of the
recorded metrics and tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bergman import BasisIndexSet, CoeffVector, analytic_decompose, basis_rows, project_basis
from .domains import Domain, QuadratureRule, build_quadrature
from .symbols import Symbol, classify, parse_symbol
from .toeplitz import (CLOSED_FORM, QUADRATURE, apply, commutator, interior_block, norms,
                       toeplitz_matrix)

__all__ = [
    "TOL_QUADRATURE",
    "TOL_CLOSED_FORM",
    "ExperimentReport",
    "MomentTable",
    "run_radial_diagonality",
    "run_commute_check",
    "run_proof_identity",
    "run_moment_scan",
    "run_annulus_counterexample",
    "run_harmonic_pair",
    "commutator_norm_sweep",
]

TOL_QUADRATURE = 1e-8
TOL_CLOSED_FORM = 1e-12
DEFAULT_ORDERS = (64, 256)

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class ExperimentReport:
    name: str
    domain: Domain
    parameters: dict
    metrics: dict
    tolerances: dict
    verdict: str
    summary: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


@dataclass
class MomentTable:
    """``entries[a, b] = mu(ns[a], js[b]) = int conj(u) e_j conj(phi)^n dA``."""

    phi: Symbol
    psi: Symbol
    ns: np.ndarray
    js: np.ndarray
    entries: np.ndarray = field(repr=False)
    tolerance: float

    def __getitem__(self, nj):
        n, j = nj
        a = int(np.flatnonzero(self.ns == n)[0])
        b = int(np.flatnonzero(self.js == j)[0])
        return complex(self.entries[a, b])

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0

    def rows(self):
        for a, n in enumerate(self.ns):
            for b, j in enumerate(self.js):
                v = self.entries[a, b]
                yield int(n), int(j), float(v.real), float(v.imag)


def _rule(domain, rule):
    return rule if rule is not None else build_quadrature(domain, *DEFAULT_ORDERS)


def _as_symbol(s):
    return parse_symbol(s) if isinstance(s, str) else s


def _offdiag_max(M):
    M = np.asarray(M)
    off = M - np.diag(np.diag(M))
    return float(np.max(np.abs(off))) if off.size else 0.0


# ------------------------------------------------------------------ radial

def run_radial_diagonality(domain: Domain, s, N: int, rule: QuadratureRule | None = None,
                           tol: float = TOL_QUADRATURE) -> ExperimentReport:
    """Quadrature-assembled ``T_s`` for radial ``s`` should be diagonal."""
    s = _as_symbol(s)
    if not classify(s, domain).radial:
        raise ValueError(f"symbol {s} is not radial")
    rule = _rule(domain, rule)
    Tq = toeplitz_matrix(domain, s, N, QUADRATURE, rule).entries
    Tc = toeplitz_matrix(domain, s, N, CLOSED_FORM).entries
    max_offdiag = _offdiag_max(Tq)
    diag_dev = float(np.max(np.abs(np.diag(Tq) - np.diag(Tc))))
    idx = BasisIndexSet(domain, N)
    metrics = {
        "max_offdiag": max_offdiag,
        "max_diag_deviation": diag_dev,
        "diag_0": complex(Tq[idx.offset(0), idx.offset(0)]),
    }
    ok = max_offdiag < tol and diag_dev < tol
    return ExperimentReport(
        "radial_diagonality", domain,
        {"symbol": str(s), "N": N, "quadrature": rule.metadata()},
        metrics, {"max_offdiag": tol, "max_diag_deviation": tol},
        PASS if ok else FAIL,
        "diagonal" if ok else "not diagonal within tolerance",
    )


# ---------------------------------------------------------------- commuting

def _interior_commutator(domain, phi, psi, N, method, rule):
    A = toeplitz_matrix(domain, phi, N, method, rule)
    B = toeplitz_matrix(domain, psi, N, method, rule)
    C = commutator(A, B)
    return interior_block(C, phi.bandwidth, psi.bandwidth, N, domain)


def run_commute_check(domain: Domain, phi, psi, N: int, rule: QuadratureRule | None = None,
                      method: str = CLOSED_FORM, tol_zero: float | None = None) -> ExperimentReport:
    """Interior commutator norm of ``[T_phi, T_psi]`` checked against the theorem.

    Fails when an analytic nonconstant symbol commutes (numerically) with a
    non-analytic one, or when two analytic symbols fail to commute.  On the
    disk a commuting nonconstant radial symbol must also have a radial
    partner.
    """
    phi, psi = _as_symbol(phi), _as_symbol(psi)
    if tol_zero is None:
        tol_zero = TOL_CLOSED_FORM if method == CLOSED_FORM else TOL_QUADRATURE
    if method == QUADRATURE:
        rule = _rule(domain, rule)
    blk = _interior_commutator(domain, phi, psi, N, method, rule)
    est = norms(blk.block)
    fa, fb = classify(phi, domain), classify(psi, domain)
    commuting = est.two_norm < tol_zero

    verdict, summary = PASS, ""
    for a, b in ((fa, fb), (fb, fa)):
        if a.analytic and not a.constant and commuting and not b.analytic:
            verdict, summary = FAIL, "commutes with a non-analytic partner (theorem violated)"
        if domain.is_disk and a.radial and not a.constant and commuting and not b.radial:
            verdict, summary = FAIL, "radial symbol commutes with a non-radial partner"
    if fa.analytic and fb.analytic and not commuting:
        verdict, summary = FAIL, "analytic symbols fail to commute"
    if verdict == PASS:
        summary = ("commuting" if commuting else "non-commuting") + " (theorem-consistent)"
        if not est.converged:
            verdict, summary = INCONCLUSIVE, summary + "; norm estimate did not converge"

    params = {
        "phi": str(phi), "psi": str(psi), "N": N, "method": method,
        "interior_indices": [int(blk.indices[0]), int(blk.indices[-1])],
        "phi_flags": fa.as_dict(), "psi_flags": fb.as_dict(),
    }
    if rule is not None:
        params["quadrature"] = rule.metadata()
    metrics = {"interior_norm": est.two_norm, "interior_frobenius": est.frobenius}
    return ExperimentReport("commute_check", domain, params, metrics,
                            {"tol_zero": tol_zero}, verdict, summary)


def commutator_norm_sweep(domain: Domain, phi, psi, Ns, method=CLOSED_FORM, rule=None):
    """Rows ``(N, interior two-norm)`` for a norm-versus-truncation plot."""
    phi, psi = _as_symbol(phi), _as_symbol(psi)
    rows = []
    for N in Ns:
        blk = _interior_commutator(domain, phi, psi, N, method, rule)
        rows.append((int(N), norms(blk.block).two_norm))
    return rows


# ----------------------------------------------------------- proof identity

def run_proof_identity(domain: Domain, phi, psi, n_max: int, N: int,
                       rule: QuadratureRule | None = None, method: str = CLOSED_FORM,
                       tol: float = TOL_QUADRATURE) -> ExperimentReport:
    """Compare ``T_psi T_{phi^n} 1 - T_{phi^n} T_psi 1`` with ``P(u phi^n)``.

    ``u`` is ``psi - f`` written back in the term grammar, ``f`` being the
    truncated projection of ``psi``.  Since ``f`` lies in the truncated span
    and ``phi^n`` is a polynomial of degree below ``N``, both sides agree on
    every retained coefficient, not only on an interior block.
    """
    phi, psi = _as_symbol(phi), _as_symbol(psi)
    if not classify(phi, domain).analytic:
        raise ValueError(f"phi = {phi} is not analytic")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if n_max * phi.degree >= N:
        raise ValueError(f"N = {N} too small for phi^{n_max} of degree {n_max * phi.degree}")
    if method == QUADRATURE:
        rule = _rule(domain, rule)
    idx = BasisIndexSet(domain, N)
    one = CoeffVector.constant_one(idx)
    T_psi = toeplitz_matrix(domain, psi, N, method, rule)
    f = project_basis(domain, psi, N, rule if method == QUADRATURE else None)
    u = psi - f.to_symbol()
    T_psi_one = apply(T_psi, one)

    metrics, worst = {}, 0.0
    for n in range(1, n_max + 1):
        phin = phi ** n
        T_phin = toeplitz_matrix(domain, phin, N, method, rule)
        lhs = apply(T_psi, apply(T_phin, one)).coeffs - apply(T_phin, T_psi_one).coeffs
        g = u * phin
        if method == CLOSED_FORM:
            rhs = project_basis(domain, g, N).coeffs
        else:
            rhs = project_basis(domain, lambda w, g=g: g(w), N, rule).coeffs
        res = float(np.linalg.norm(lhs - rhs))
        worst = max(worst, res)
        metrics[f"residual_n{n}"] = res
        metrics[f"lhs_norm_n{n}"] = float(np.linalg.norm(lhs))
        if n == 1:
            # lhs as a function: its constant term is c_0 * e_0
            i0 = idx.offset(0)
            metrics["lhs_n1_constant_term"] = complex(lhs[i0] / one.coeffs[i0])
            metrics["lhs_n1_nonconstant_norm"] = float(np.linalg.norm(np.delete(lhs, i0)))
    metrics["max_residual"] = worst
    ok = worst < tol
    return ExperimentReport(
        "proof_identity", domain,
        {"phi": str(phi), "psi": str(psi), "n_max": n_max, "N": N, "method": method,
         "u": str(u)},
        metrics, {"max_residual": tol}, PASS if ok else FAIL,
        "identity holds" if ok else "identity violated",
    )


# --------------------------------------------------------------- moments

def run_moment_scan(domain: Domain, phi, psi, n_max: int, j_max: int,
                    rule: QuadratureRule | None = None, N: int | None = None,
                    tol: float = TOL_QUADRATURE):
    """Moments ``mu(n, j)`` of the non-analytic part of ``psi``.

    Returns ``(MomentTable, ExperimentReport)``.  Only finitely many ``h = e_j``
    and ``n`` are scanned, so vanishing moments are evidence, not proof, that
    ``u = 0``; a nonzero moment does prove ``u != 0``.
    """
    phi, psi = _as_symbol(phi), _as_symbol(psi)
    if not classify(phi, domain).analytic:
        raise ValueError(f"phi = {phi} is not analytic")
    rule = _rule(domain, rule)
    if N is None:
        # P of a term only touches frequency m - n, so this N captures f exactly
        N = psi.bandwidth + 1
    dec = analytic_decompose(domain, psi, N, rule)
    z = rule.points
    wu = rule.weights * np.conj(dec.residual(z))
    phibar = np.conj(np.asarray(phi(z), dtype=complex))
    js = np.arange(j_max + 1) if domain.is_disk else np.arange(-j_max, j_max + 1)
    ns = np.arange(n_max + 1)
    E = basis_rows(domain, js, z)
    entries = np.empty((ns.size, js.size), dtype=complex)
    pw = np.ones_like(phibar)
    for a in range(ns.size):
        entries[a] = E @ (wu * pw)
        pw = pw * phibar
    table = MomentTable(phi, psi, ns, js, entries, tol)

    all_small = table.max_abs < tol
    u_small = dec.residual_norm < tol
    ok = all_small == u_small
    metrics = {"max_abs_moment": table.max_abs, "residual_norm": dec.residual_norm}
    if n_max >= 1 and 0 in js:
        metrics["mu_1_0"] = table[1, 0]
    summary = ("all scanned moments vanish" if all_small else "nonzero moment found") + \
        ("; u vanishes" if u_small else "; u is nonzero")
    if all_small and not u_small:
        summary += " (scan too short to detect u)"
    report = ExperimentReport(
        "moment_scan", domain,
        {"phi": str(phi), "psi": str(psi), "n_max": n_max, "j_max": j_max, "N": N,
         "quadrature": rule.metadata()},
        metrics, {"moment": tol, "residual_norm": tol}, PASS if ok else FAIL, summary,
    )
    return table, report


# ---------------------------------------------------------------- annulus

DEFAULT_RADIAL_PARTNERS = ("z*zbar", "1", "z^2*zbar^2", "r^0.5", "log(r)^2")


def run_annulus_counterexample(rho: float, radial_partners=DEFAULT_RADIAL_PARTNERS, N: int = 8,
                               rule: QuadratureRule | None = None,
                               tol: float = 1e-10) -> ExperimentReport:
    """``T_{log r}`` on the annulus is diagonal and commutes with radial ``T``.

    ``log r`` is harmonic but neither analytic nor conjugate analytic, so the
    annulus breaks the disk-style dichotomy for harmonic symbols.
    """
    domain = Domain.annulus(rho)
    rule = _rule(domain, rule)
    log_r = parse_symbol("log(r)")
    TL_q = toeplitz_matrix(domain, log_r, N, QUADRATURE, rule)
    TL_c = toeplitz_matrix(domain, log_r, N, CLOSED_FORM)
    idx = BasisIndexSet(domain, N)
    flags = classify(log_r, domain)
    metrics = {
        "max_offdiag": _offdiag_max(TL_q.entries),
        "diag_0": complex(TL_q.entries[idx.offset(0), idx.offset(0)]),
    }
    worst = 0.0
    for text in radial_partners:
        s = _as_symbol(text)
        if not classify(s, domain).radial:
            raise ValueError(f"partner {s} is not radial")
        exact = norms(commutator(TL_c, toeplitz_matrix(domain, s, N, CLOSED_FORM))).two_norm
        quad = norms(commutator(TL_q, toeplitz_matrix(domain, s, N, QUADRATURE, rule))).two_norm
        metrics[f"commutator_exact[{s}]"] = exact
        metrics[f"commutator_quadrature[{s}]"] = quad
        worst = max(worst, exact, quad)
    breaker = flags.harmonic and not flags.analytic and not flags.conjugate_analytic
    ok = metrics["max_offdiag"] < tol and worst < tol and breaker
    return ExperimentReport(
        "annulus_counterexample", domain,
        {"N": N, "partners": [str(_as_symbol(p)) for p in radial_partners],
         "log_r_flags": flags.as_dict(), "quadrature": rule.metadata()},
        metrics, {"max_offdiag": tol, "commutator": tol}, PASS if ok else FAIL,
        "log r commutes with every radial partner" if ok else "counterexample not reproduced",
    )


# --------------------------------------------------------------- harmonic

def _l2_fit(rule, target, basis_vals):
    sw = np.sqrt(rule.weights)
    A = np.column_stack([sw * v for v in basis_vals])
    b = sw * target
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    return coef, float(np.linalg.norm(A @ coef - b))


def run_harmonic_pair(phi, psi, N: int = 32, rule: QuadratureRule | None = None,
                      tol_zero: float = TOL_CLOSED_FORM, tol_fit: float = TOL_QUADRATURE):
    """Check the harmonic trichotomy on the disk at truncation ``N``.

    A commuting pair must be both analytic, both conjugate analytic, or
    affinely related; the relation is detected with an L^2(dA) least-squares
    fit of each symbol against the other and the constant 1.
    """
    domain = Domain.disk()
    phi, psi = _as_symbol(phi), _as_symbol(psi)
    fa, fb = classify(phi, domain), classify(psi, domain)
    if not (fa.harmonic and fb.harmonic):
        raise ValueError("both symbols must be harmonic")
    rule = _rule(domain, rule)
    blk = _interior_commutator(domain, phi, psi, N, CLOSED_FORM, None)
    est = norms(blk.block)

    z = rule.points
    pv, qv = np.asarray(phi(z), dtype=complex), np.asarray(psi(z), dtype=complex)
    one = np.ones_like(pv)
    fits = [("psi = a*phi + b", *_l2_fit(rule, qv, [pv, one])),
            ("phi = a*psi + b", *_l2_fit(rule, pv, [qv, one]))]
    direction, (a, b), resid = min(fits, key=lambda f: f[2])

    commuting = est.two_norm < tol_zero
    related = (fa.analytic and fb.analytic) or (fa.conjugate_analytic and fb.conjugate_analytic) \
        or resid < tol_fit
    ok = commuting == related
    if ok:
        summary = "commuting, relation found" if commuting else "non-commuting, no relation"
    else:
        summary = "trichotomy violated"
    return ExperimentReport(
        "harmonic_pair", domain,
        {"phi": str(phi), "psi": str(psi), "N": N, "fit": direction,
         "phi_flags": fa.as_dict(), "psi_flags": fb.as_dict(), "quadrature": rule.metadata()},
        {"interior_norm": est.two_norm, "fit_residual": resid, "fit_a": complex(a),
         "fit_b": complex(b)},
        {"tol_zero": tol_zero, "fit_residual": tol_fit}, PASS if ok else FAIL, summary,
    )
