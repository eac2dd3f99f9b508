"""
The annulus and harmonic pairs
==============================

On the annulus ``log r`` is harmonic, neither analytic nor conjugate analytic,
and its Toeplitz operator is diagonal in the Laurent basis.  So it commutes
with every radial symbol.  On the disk, two harmonic symbols commute only
when both are analytic, both conjugate analytic, or affinely related.
"""

import numpy as np

from bergtoep import Domain
from bergtoep.lab import run_annulus_counterexample, run_harmonic_pair
from bergtoep.symbols import parse_symbol
from bergtoep.toeplitz import toeplitz_matrix

ring = Domain.annulus(0.5)
T = toeplitz_matrix(ring, parse_symbol("log(r)"), 3)
print("indices", T.indices)
print("diag T_{log r}:", np.round(np.diag(T.entries).real, 6))

rep = run_annulus_counterexample(0.5)
for k, v in rep.metrics.items():
    print(f"  {k:<40} {abs(v):.2e}" if "commutator" in k else f"  {k:<40} {v}")
print(rep.summary)

for phi, psi in [("z+zbar", "2*z+2*zbar+5"), ("z+zbar", "z-zbar"), ("z", "z^2+3")]:
    rep = run_harmonic_pair(phi, psi)
    print(f"({phi}, {psi}): norm {rep.metrics['interior_norm']:.3g}, "
          f"fit residual {rep.metrics['fit_residual']:.2g} -> {rep.summary}")
