"""
The operator identity and the moment scan
=========================================

Write ``psi = f + u`` with ``f`` the analytic projection.  Then
``T_psi T_{phi^n} 1 - T_{phi^n} T_psi 1 = P(u phi^n)``, and its pairing with
``e_j`` is a moment of ``u``.  Nonzero moments certify that ``u != 0``.
"""

import math

from bergtoep import Domain, build_quadrature
from bergtoep.bergman import analytic_decompose
from bergtoep.lab import run_moment_scan, run_proof_identity
from bergtoep.symbols import parse_symbol

disk = Domain.disk()
rule = build_quadrature(disk, 64, 256)

dec = analytic_decompose(disk, parse_symbol("z^2*zbar"), 8, rule)
print("z^2 zbar = f + u with f =", dec.f.to_symbol(), " ||u|| =", dec.residual_norm)

for psi in ("zbar", "z^2*zbar", "zbar^2+z"):
    rep = run_proof_identity(disk, "z", psi, 4, 64)
    print(f"psi = {psi:>9}: max residual {rep.metrics['max_residual']:.1e}, "
          f"lhs norms " + ", ".join(f"{rep.metrics[f'lhs_norm_n{n}']:.4f}" for n in range(1, 5)))

table, rep = run_moment_scan(disk, "z", "zbar", 4, 8, rule)
print("\nmu(1, 0) =", table[1, 0].real, " sqrt(pi)/2 =", math.sqrt(math.pi) / 2)
print(rep.summary)
table, rep = run_moment_scan(disk, "z", "z+z^2", 4, 8, rule)
print("analytic psi: max |mu| =", table.max_abs, "-", rep.summary)
