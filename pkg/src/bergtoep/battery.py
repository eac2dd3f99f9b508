"""Default verification battery: one composite report per acceptance check.

``run_battery()`` is what ``bergtoep verify`` executes.  Every check pins its
own tolerances; nothing here is tuned at run time.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .bergman import project_basis, project_kernel
from .domains import Domain, build_quadrature
from .lab import (PASS, FAIL, ExperimentReport, run_annulus_counterexample, run_commute_check,
                  run_harmonic_pair, run_moment_scan, run_proof_identity,
                  run_radial_diagonality)
from .symbols import parse_symbol
from .toeplitz import commutator, norms, toeplitz_matrix

__all__ = ["CHECKS", "run_battery", "kernel_test_points", "annulus_log_diag0"]

DISK = Domain.disk()

CROSS_ORACLE_BATTERY = ("z", "z^2", "zbar", "z*zbar", "z^2*zbar", "z+zbar", "r^0.5*z")
CONTRAPOSITIVE_PAIRS = (("z", "zbar"), ("z^2", "z*zbar"), ("z", "z^2*zbar"))
ANALYTIC_PARTNERS = ("z^3", "z+z^2")
PROOF_PSIS = ("zbar", "z^2*zbar", "zbar^2+z")
# brute-force value at N = 32 is exactly 1 (twice the (0,0) entry of [T_zbar, T_z]);
# the check uses a tenth of it as the floor
HARMONIC_NONCOMMUTING_FLOOR = 0.1


def kernel_test_points(count=20, r_max=0.9):
    """Deterministic interior points with ``|z| <= r_max`` (golden-angle spiral)."""
    k = np.arange(count)
    radii = r_max * (k + 1) / count
    angles = k * math.pi * (3.0 - math.sqrt(5.0))
    return radii * np.exp(1j * angles)


def annulus_log_diag0(rho):
    """``<log r e_0, e_0>`` on the annulus from the antiderivative of ``r log r``."""
    F = lambda r: r * r / 2.0 * math.log(r) - r * r / 4.0  # noqa: E731
    return 2.0 * math.pi * (F(1.0) - F(rho)) / (math.pi * (1.0 - rho * rho))


def _report(name, metrics, tolerances, ok, t0, **params):
    metrics = dict(metrics, seconds=time.perf_counter() - t0)
    return ExperimentReport(name, params.pop("domain", DISK), params, metrics, tolerances,
                            PASS if ok else FAIL)


def check_radial_diagonality():
    t0 = time.perf_counter()
    rule = build_quadrature(DISK, 64, 256)
    rep = run_radial_diagonality(DISK, "z*zbar", 16, rule, tol=1e-10)
    T = toeplitz_matrix(DISK, parse_symbol("z*zbar"), 16, "quadrature", rule).entries
    k = np.arange(16)
    diag_err = float(np.max(np.abs(np.diag(T) - (k + 1) / (k + 2))))
    m = {"max_offdiag": rep.metrics["max_offdiag"], "max_diag_error": diag_err}
    ok = m["max_offdiag"] < 1e-10 and diag_err < 1e-10
    out = _report("radial_diagonality", m, {"max_offdiag": 1e-10, "max_diag_error": 1e-10,
                                            "seconds": 5.0}, ok, t0, symbol="z*zbar", N=16)
    out.verdict = PASS if ok and out.metrics["seconds"] < 5.0 else FAIL
    return out


def check_diagonal_commutation():
    t0 = time.perf_counter()
    a, b = parse_symbol("z*zbar"), parse_symbol("z^2*zbar^2")
    N = 16
    C = commutator(toeplitz_matrix(DISK, a, N), toeplitz_matrix(DISK, b, N))
    rule = build_quadrature(DISK, 64, 256)
    Cq = commutator(toeplitz_matrix(DISK, a, N, "quadrature", rule),
                    toeplitz_matrix(DISK, b, N, "quadrature", rule))
    m = {"closed_form_max_abs": float(np.max(np.abs(C))),
         "quadrature_norm": norms(Cq).two_norm}
    ok = m["closed_form_max_abs"] == 0.0 and m["quadrature_norm"] < 1e-10
    out = _report("diagonal_commutation", m, {"closed_form_max_abs": 0.0, "quadrature_norm": 1e-10,
                                              "seconds": 5.0}, ok, t0, phi=str(a), psi=str(b), N=N)
    out.verdict = PASS if ok and out.metrics["seconds"] < 5.0 else FAIL
    return out


def check_cross_oracle():
    t0 = time.perf_counter()
    rule = build_quadrature(DISK, 64, 256)
    m = {}
    for text in CROSS_ORACLE_BATTERY:
        s = parse_symbol(text)
        Tc = toeplitz_matrix(DISK, s, 32).entries
        Tq = toeplitz_matrix(DISK, s, 32, "quadrature", rule).entries
        m[f"max_deviation[{s}]"] = float(np.max(np.abs(Tc - Tq)))
    worst = max(m.values())
    m["max_deviation"] = worst
    out = _report("cross_oracle_assembly", m, {"max_deviation": 1e-8, "seconds": 60.0},
                  worst < 1e-8, t0, battery=list(CROSS_ORACLE_BATTERY), N=32)
    out.verdict = PASS if worst < 1e-8 and out.metrics["seconds"] < 60.0 else FAIL
    return out


def check_self_commutator():
    t0 = time.perf_counter()
    N = 32
    C = commutator(toeplitz_matrix(DISK, parse_symbol("zbar"), N),
                   toeplitz_matrix(DISK, parse_symbol("z"), N))
    k = np.arange(N - 1)
    err = float(np.max(np.abs(np.diag(C)[: N - 1] - 1.0 / ((k + 1) * (k + 2)))))
    m = {"max_diag_error": err, "entry_00": complex(C[0, 0])}
    return _report("self_commutator", m, {"max_diag_error": 1e-10}, err < 1e-10, t0, N=N)


def check_theorem_contrapositive():
    t0 = time.perf_counter()
    m, ok = {}, True
    for phi, psi in CONTRAPOSITIVE_PAIRS:
        r32 = run_commute_check(DISK, phi, psi, 32)
        r64 = run_commute_check(DISK, phi, psi, 64)
        n32, n64 = r32.metrics["interior_norm"], r64.metrics["interior_norm"]
        m[f"norm32[{phi},{psi}]"] = n32
        m[f"norm64[{phi},{psi}]"] = n64
        ok &= n32 >= 0.05 and n64 >= n32 - 1e-3 and r32.passed and r64.passed
    for psi in ANALYTIC_PARTNERS:
        r = run_commute_check(DISK, "z", psi, 32)
        m[f"norm32[z,{psi}]"] = r.metrics["interior_norm"]
        ok &= r.metrics["interior_norm"] < 1e-10 and r.passed
    return _report("theorem_contrapositive", m,
                   {"non_analytic_floor": 0.05, "monotone_slack": 1e-3, "analytic_zero": 1e-10},
                   ok, t0)


def check_proof_identity():
    t0 = time.perf_counter()
    m, ok = {}, True
    for psi in PROOF_PSIS:
        r = run_proof_identity(DISK, "z", psi, 4, 64)
        m[f"max_residual[{psi}]"] = r.metrics["max_residual"]
        ok &= r.metrics["max_residual"] < 1e-8
        if psi == "zbar":
            c = r.metrics["lhs_n1_constant_term"]
            m["zbar_n1_constant_term"] = c
            m["zbar_n1_other_coeffs"] = r.metrics["lhs_n1_nonconstant_norm"]
            ok &= abs(c - 0.5) < 1e-8 and abs(m["zbar_n1_other_coeffs"]) < 1e-8
    return _report("proof_identity", m, {"max_residual": 1e-8, "constant_term": 1e-8}, ok, t0,
                   phi="z", n_max=4, N=64)


def check_moment_scan():
    t0 = time.perf_counter()
    rule = build_quadrature(DISK, 64, 256)
    table, rep = run_moment_scan(DISK, "z", "zbar", 4, 8, rule)
    mu10 = table[1, 0]
    m = {"mu_1_0": mu10, "mu_1_0_error": abs(mu10 - math.sqrt(math.pi) / 2)}
    ok = m["mu_1_0_error"] < 1e-8 and rep.passed
    for psi in ("z^2", "z^3", "z+z^2"):
        t, r = run_moment_scan(DISK, "z", psi, 4, 8, rule)
        m[f"max_abs_moment[{psi}]"] = t.max_abs
        ok &= t.max_abs < 1e-10 and r.passed
    return _report("moment_scan", m, {"mu_1_0_error": 1e-8, "analytic_moment": 1e-10}, ok, t0,
                   phi="z", n_max=4, j_max=8)


def check_annulus():
    t0 = time.perf_counter()
    rep = run_annulus_counterexample(0.5, ("z*zbar",), N=8)
    oracle = annulus_log_diag0(0.5)
    d0 = rep.metrics["diag_0"]
    m = {"max_offdiag": rep.metrics["max_offdiag"], "diag_0": d0,
         "diag_0_error": abs(d0 - oracle), "diag_0_vs_pinned": abs(d0 - (-0.268951)),
         "commutator[z*zbar]": max(rep.metrics["commutator_exact[z*zbar]"],
                                   rep.metrics["commutator_quadrature[z*zbar]"])}
    flags = rep.parameters["log_r_flags"]
    ok = (m["max_offdiag"] < 1e-10 and m["diag_0_error"] < 1e-10 and m["diag_0_vs_pinned"] < 1e-5
          and m["commutator[z*zbar]"] < 1e-10 and flags["harmonic"] and not flags["analytic"]
          and not flags["conjugate_analytic"])
    return _report("annulus_counterexample", m,
                   {"max_offdiag": 1e-10, "diag_0_vs_pinned": 1e-5, "commutator": 1e-10},
                   ok, t0, domain=Domain.annulus(0.5), N=8, log_r_flags=flags)


def check_harmonic_pair():
    t0 = time.perf_counter()
    a = run_harmonic_pair("z+zbar", "2*z+2*zbar+5", 32)
    b = run_harmonic_pair("z+zbar", "z-zbar", 32)
    m = {"related_norm": a.metrics["interior_norm"], "related_fit": a.metrics["fit_residual"],
         "unrelated_norm": b.metrics["interior_norm"], "unrelated_fit": b.metrics["fit_residual"]}
    ok = (m["related_norm"] < 1e-10 and m["related_fit"] < 1e-10
          and m["unrelated_norm"] > HARMONIC_NONCOMMUTING_FLOOR and a.passed and b.passed)
    return _report("harmonic_pair", m, {"related": 1e-10,
                                        "unrelated_floor": HARMONIC_NONCOMMUTING_FLOOR}, ok, t0, N=32)


def check_projection_consistency():
    t0 = time.perf_counter()
    g = parse_symbol("zbar+z^2")
    pts = kernel_test_points()
    rule = build_quadrature(DISK, 64, 256)
    via_kernel = project_kernel(g, pts, rule)
    via_basis = project_basis(DISK, g, 32)(pts)
    err = float(np.max(np.abs(via_kernel - via_basis)))
    return _report("projection_consistency", {"max_difference": err}, {"max_difference": 1e-6},
                   err < 1e-6, t0, symbol=str(g), N=32, points=len(pts))


CHECKS = (
    check_radial_diagonality,
    check_diagonal_commutation,
    check_cross_oracle,
    check_self_commutator,
    check_theorem_contrapositive,
    check_proof_identity,
    check_moment_scan,
    check_annulus,
    check_harmonic_pair,
    check_projection_consistency,
)


def run_battery(checks=CHECKS):
    return [check() for check in checks]
