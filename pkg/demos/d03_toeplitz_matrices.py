"""
Truncated Toeplitz matrices
===========================

Closed-form assembly is exact up to rounding; quadrature assembly is an
independent path.  The two agree far below the quadrature tolerance.
"""

import numpy as np

from bergtoep import Domain, build_quadrature
from bergtoep.symbols import parse_symbol
from bergtoep.toeplitz import commutator, interior_block, norms, toeplitz_matrix

disk = Domain.disk()
np.set_printoptions(precision=4, suppress=True, linewidth=100)

Tz = toeplitz_matrix(disk, parse_symbol("z"), 6)
print("T_z (weighted shift):\n", Tz.entries.real)

Tr = toeplitz_matrix(disk, parse_symbol("z*zbar"), 6)
print("diag of T_{|z|^2}:", np.diag(Tr.entries).real, "= (k+1)/(k+2)")

rule = build_quadrature(disk, 64, 256)
for text in ("z^2*zbar", "r^0.5*z", "z + zbar"):
    s = parse_symbol(text)
    a = toeplitz_matrix(disk, s, 32).entries
    b = toeplitz_matrix(disk, s, 32, "quadrature", rule).entries
    print(f"{text:>10}: closed form vs quadrature {np.max(np.abs(a - b)):.2e}")

# the last rows of a truncated product are polluted by the cut; keep the interior
C = commutator(toeplitz_matrix(disk, parse_symbol("zbar"), 8),
               toeplitz_matrix(disk, parse_symbol("z"), 8))
blk = interior_block(C, 1, 1, 8)
print("diag [T_zbar, T_z], interior:", np.diag(blk.block).real)
print("1/((k+1)(k+2))             :", 1 / ((np.arange(6) + 1) * (np.arange(6) + 2)))
print("norms:", norms(blk.block))
