r"""
Koopman matrices and invariant measures
=======================================

Functions move by composition, measures by the transposed matrices, and
the extreme invariant measures sit on the minimal sets.
"""

from fractions import Fraction

from ergoscope import (
    FiniteSystem,
    Measure,
    Transformation,
    adjoint_on_measure,
    cyclic_shift_system,
    decomposition_check,
    fixed_space,
    invariant_measures,
    koopman_matrix,
    minimal_sets,
)

shift = cyclic_shift_system(3)
m = koopman_matrix(shift.generator_maps[0])
print("Koopman matrix of the 3-shift:")
for row in m.rows:
    print("  ", [str(x) for x in row])

# The adjoint pushes point masses along the map: delta_1 -> delta_2.
print("push delta_1:", adjoint_on_measure(m, Measure.dirac(3, 1)).weights)

# A map with two fixed points and one transient state has two extreme
# invariant measures, one per minimal set.
system = FiniteSystem(("0", "1", "2"), (("m", Transformation((0, 1, 0))),))
print("\nminimal sets:", [sorted(s) for s in minimal_sets(system)])
for mu in invariant_measures(system):
    print("extreme invariant measure:", [str(w) for w in mu.weights])

# Fixed spaces and the splitting fix(S) + lin rg(Id - S).
print("\nfixed space of the shift:", fixed_space([m]))
report = decomposition_check(shift)
print(f"decomposition: {report.dim_fix} + {report.dim_range_span} "
      f"{'=' if report.direct_sum else '!='} 3")

uniform = Measure.uniform_on(3, range(3))
f = (Fraction(2), Fraction(0), Fraction(1))
print("pairing <f, uniform> =", uniform.pairing(f))
