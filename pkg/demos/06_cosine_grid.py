r"""
The |cos| multiplication operator on a grid
===========================================

Iterating mu -> |cos|^n * mu leaves the mass at multiples of pi exactly
in place and kills everything else geometrically, so the weak* limit of
any starting measure is its projection onto the pi point masses.
"""

import numpy as np

from ergoscope import build_grid, iterate_adjoint, weak_star_limit_check
from ergoscope.cosgrid import (
    dirac_weights,
    off_pi_mass,
    pi_projection,
    uniform_weights,
)

model = build_grid(2, 100)  # [0, 2pi], pi at index 100
print("grid points:", len(model.points),
      "| pi indices:", list(model.pi_indices))

mu = uniform_weights(model)
for n in (1, 10, 100, 1000, 10**5):
    out = iterate_adjoint(model, mu, n)
    print(f"n={n:>6}  off-pi mass {off_pi_mass(model, out):.3e}")

report = weak_star_limit_check(model, mu, tol=1e-6)
print("\npowers reach tolerance by n =", report.n_power)
print("Cesàro averages only by n =", report.n_cesaro,
      "(they decay like 1/n)")
print("limit is a probability measure:", report.limit_is_probability,
      "- the off-pi mass is gone")

# A measure with no mass at any multiple of pi converges to zero: the
# limit functional is not a probability measure.
away = dirac_weights(model, 37)
print("\ndelta at x=37*pi/100: projection mass =",
      float(pi_projection(model, away).sum()))

# Mass at pi itself never moves, bit for bit.
at_pi = dirac_weights(model, 100)
assert np.array_equal(iterate_adjoint(model, at_pi, 10**5), at_pi)
print("delta at pi is fixed exactly under 1e5 iterations")
