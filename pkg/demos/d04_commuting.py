"""
Which Toeplitz operators commute?
=================================

With an analytic nonconstant symbol, a commuting partner must be analytic.
The interior commutator norm is stable in ``N``, so finite truncations show it.
"""

from bergtoep import Domain
from bergtoep.lab import commutator_norm_sweep, run_commute_check

disk = Domain.disk()
pairs = [("z", "zbar"), ("z^2", "z*zbar"), ("z", "z^2*zbar"), ("z", "z^3"), ("z", "z+z^2"),
         ("z*zbar", "r^0.5")]
for phi, psi in pairs:
    rep = run_commute_check(disk, phi, psi, 32)
    print(f"[{phi:>6}, {psi:>8}]  norm {rep.metrics['interior_norm']:.6f}  {rep.summary}")

print("\nN   ||[T_z^2, T_|z|^2]||")
for N, v in commutator_norm_sweep(disk, "z^2", "z*zbar", [8, 16, 32, 64]):
    print(f"{N:<3} {v:.6f}")

# a small but nonzero commutator: shift-by-two with weights peaking at k = 0
rep = run_commute_check(disk, "z", "z^2*zbar", 64)
print("\n[T_z, T_{z^2 zbar}] interior norm:", rep.metrics["interior_norm"])
