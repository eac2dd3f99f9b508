"""
Polar quadrature on the disk and the annulus
============================================

A tensor Gauss-Legendre x trapezoid rule integrates smooth functions of
``(r, theta)`` to machine precision.  Singular radial factors converge
algebraically, which the adaptive driver reports.
"""

import math

import numpy as np

from bergtoep import Domain, build_quadrature, integrate, integrate_adaptive

disk = Domain.disk()
ring = Domain.annulus(0.5)

# area of each domain
for dom in (disk, ring):
    rule = build_quadrature(dom, 16, 32)
    print(dom, "area", integrate(rule, lambda z: 1.0), "exact", dom.area)

# |z|^2 over the disk is pi/2
rule = build_quadrature(disk, 16, 32)
print("int |z|^2 dA =", integrate(rule, lambda z: np.abs(z) ** 2).real, "vs", math.pi / 2)

# log r over the annulus, against its antiderivative
F = lambda r: r * r / 2 * math.log(r) - r * r / 4
print("int log r dA =", integrate(build_quadrature(ring, 32, 8), lambda z: np.log(np.abs(z))).real,
      "vs", 2 * math.pi * (F(1.0) - F(0.5)))

# r^0.5 has a kink at the origin; the adaptive driver doubles until it settles
res = integrate_adaptive(disk, lambda z: np.abs(z) ** 0.5, tol=1e-10)
print("int r^0.5 dA =", res.value.real, "(4 pi / 5 =", 4 * math.pi / 5, ")",
      "orders", res.orders, "converged", res.converged)
