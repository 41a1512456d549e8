r"""
Enveloping semigroups and the zero-element classifier
=====================================================

Three small systems, three different verdicts:

* the 3-cycle is uniquely ergodic (rank-one zero),
* a map with two fixed points is mean ergodic but not uniquely so
  (zero of rank two),
* two constant maps admit no zero at all and fail weak* mean
  ergodicity.
"""

from ergoscope import (
    FiniteSystem,
    Transformation,
    classify,
    convex_koehler_zero,
    cyclic_shift_system,
    ellis,
    jacobs,
    koehler,
    report_to_json_dict,
)

systems = {
    "cyclic shift": cyclic_shift_system(3),
    "two fixed points": FiniteSystem(
        ("0", "1", "2"),
        (("id", Transformation((0, 1, 2))), ("m", Transformation((0, 1, 0)))),
    ),
    "two constants": FiniteSystem(
        ("0", "1"),
        (("c0", Transformation((0, 0))), ("c1", Transformation((1, 1)))),
    ),
}

for name, system in systems.items():
    report = classify(system)
    print(f"{name}:")
    print(f"  ellis size {report.ellis_size}, kernel size {report.kernel_size}")
    print(f"  weak* {report.weak_star_mean_ergodic.value},"
          f" norm {report.norm_mean_ergodic.value},"
          f" uniquely ergodic {report.unique_ergodic.value}"
          + (f" (zero rank {report.zero_rank})" if report.zero_rank else ""))

# The zero element, when it exists, comes with an exact convex witness.
cert = convex_koehler_zero(cyclic_shift_system(3)).certificate
print("\nzero witness:",
      [(t.images, str(w)) for t, w in cert.witness])

# The Jacobs semigroup restricts the matrix semigroup to the support of
# an invariant measure; with full support it is a faithful copy.
shift = cyclic_shift_system(3)
from ergoscope import invariant_measures
mu = invariant_measures(shift)[0]
print("jacobs size:", jacobs(shift, mu).semigroup.size,
      "| koehler size:", koehler(shift).size)

# Reports serialize to a stable JSON document.
doc = report_to_json_dict(classify(systems["two constants"]))
print("\ntwo constants in JSON:", doc["zero"]["status"], "/",
      doc["weak_star_mean_ergodic"])
