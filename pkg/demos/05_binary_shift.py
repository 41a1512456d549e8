r"""
A tame shift orbit that is not weak* mean ergodic
=================================================

The word 1 0^10 11 0^100 111 0^1000 ... packs ever longer blocks of both
symbols into one orbit, so its closure carries two shift-fixed points.
Sampling any prefix shows both constant windows, while the Cesàro
averages of the first coordinate crawl to zero.
"""

from ergoscope import (
    FIRST_COORDINATE,
    block_boundary,
    cesaro_trace,
    classify_subshift,
    ellis,
    fixed_windows,
    rolandex_prefix,
    window_closure,
    windows_system,
)

horizon = block_boundary(8)  # ~1.1e7 symbols, a handful of runs
word = rolandex_prefix(horizon)
print(f"prefix of {word.length} symbols stored as {len(word.runs)} runs")
print("start of the word:", "".join(map(str, word.factor(0, 16))), "...")

ws = window_closure(word, 7)
print("\nwindows at W=7:", len(ws.windows))
print("constant windows:", ["".join(map(str, w)) for w in fixed_windows(ws)])

report = classify_subshift(word, 7)
print("verdict:", report.note)

# The density of ones up to k(N) is sum(1..N-1) / k(N); at the default
# horizon that is 28 / 11111138.
ns = [block_boundary(k) for k in (4, 6, 8)]
for n, value in zip(ns, cesaro_trace(word, FIRST_COORDINATE, ns)):
    print(f"average of first coordinate over N={n}: {value} ~ {float(value):.2e}")

# At a coarse window the truncation itself becomes a finite system whose
# transformation closure contains both constant maps.
small = window_closure(rolandex_prefix(block_boundary(5) + 5), 4)
system = windows_system(small)
sg = ellis(system)
constants = sorted(
    system.states[e.images[0]] for e in sg.elements if e.rank == 1
)
print("\ntruncated system:", system.n, "windows,",
      sg.size, "closure elements")
print("constant maps land on:", constants)
