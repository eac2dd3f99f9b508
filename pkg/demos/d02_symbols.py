"""
Symbols: parsing, arithmetic and classification
===============================================

Symbols are finite sums of ``c z^m zbar^n r^alpha log(r)^p``.
"""

from bergtoep import Domain
from bergtoep.symbols import classify, fourier_profiles, parse_symbol

import numpy as np

phi = parse_symbol("z + zbar")
psi = parse_symbol("2*z + 2*zbar + 5")
print("phi =", phi, " psi =", psi)
print("phi * psi =", phi * psi)
print("phi^3 =", phi ** 3)
print("conj(z^2*zbar) =", parse_symbol("z^2*zbar").conjugate())

for text in ("z^3 + 1", "zbar^2", "z*zbar", "z + zbar", "log(r)", "r^-0.5*z"):
    s = parse_symbol(text)
    flags = classify(s, Domain.disk())
    on = [k for k, v in flags.as_dict().items() if v]
    print(f"{text:>10}: bandwidth {s.bandwidth}, flags {on}")

# angular Fourier content of z + zbar*r^2 at a few radii
prof = fourier_profiles(parse_symbol("z + zbar*r^2"), range(-2, 3), np.array([0.25, 0.5, 1.0]))
print("frequencies with support:", prof.support())

# parse errors carry a byte offset
try:
    parse_symbol("z + * zbar")
except ValueError as exc:
    print("error:", exc)
