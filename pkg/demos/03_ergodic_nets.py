r"""
Ergodic nets
============

Cesàro, Abel, and Følner-box averages, their defects, and an alternating
net that is left ergodic without converging.
"""

from fractions import Fraction

from ergoscope import (
    OperatorMatrix,
    Transformation,
    abel,
    adjoint_matrix,
    cesaro,
    constant_net,
    detect_limit,
    folner_box,
    interleave,
    koopman_matrix,
    verify_net,
)

F = Fraction
shift = koopman_matrix(Transformation((1, 2, 0)))

# One full period of the 3-cycle averages to the rank-one projection.
print("cesaro(shift, 3):")
for row in cesaro(shift, 3).rows:
    print("  ", [str(x) for x in row])

# The left defect obeys the telescoping bound max|(I-M) A_N| <= 2/N.
for n in (3, 9, 27):
    defect = (OperatorMatrix.identity(3) - shift) @ cesaro(shift, n)
    worst = max(abs(x) for row in defect.rows for x in row)
    print(f"N={n:3d}  defect {str(worst):>6}  bound {F(2, n)}")

# Abel means are geometric mixes of the rotations; at r=2 the weights
# over the three rotation classes are 4/7, 2/7, 1/7.
result = abel(shift, F(2), F(1, 10**9))
print("\nabel(r=2) truncated after", result.terms, "terms,",
      "tail bound", float(result.tail_bound))

# Two commuting coordinate shifts: the 2x2 box average is already the
# uniform projection.
a = koopman_matrix(Transformation((2, 3, 0, 1)))
b = koopman_matrix(Transformation((1, 0, 3, 2)))
print("\nfolner_box entries all 1/4:",
      all(x == F(1, 4) for row in folner_box([a, b], 2).rows for x in row))

# Two right zeros: the alternating net has exactly zero left defect yet
# never settles, so "left ergodic" and "convergent" come apart.
q1, q2 = Transformation((0, 1, 0)), Transformation((0, 1, 1))
a1, a2 = adjoint_matrix(q1), adjoint_matrix(q2)
net = interleave(constant_net(a1, [(a1, F(1))], 4),
                 constant_net(a2, [(a2, F(1))], 4))
verdict = verify_net(net, [a1, a2], "left", 0)
print("\nalternating net:", verdict.status,
      "| limit detected:", detect_limit(net.matrices(), F(1, 100)))
