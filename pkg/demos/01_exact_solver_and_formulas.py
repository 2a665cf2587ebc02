"""Exact expected spreading times, and the closed forms that reproduce them.

A rumor starts on one static node.  Every round pairs a uniform static
node with a uniform mobile node and the informed side informs the other.
The solver computes the expected number of rounds to reach everyone by
backward dynamic programming; for one, two, and three mobile nodes the
same numbers come out of explicit formulas.
"""

import numpy as np

from bigossip import (
    ChainParams,
    expected_phase2_time,
    expected_total_time,
    harmonic,
    three_mobile_time_exact,
    two_mobile_decomposition,
    two_mobile_time_exact,
)

# --- a small table straight from the solver --------------------------------

print("expected rounds to full spreading (rows: static, cols: mobile)")
mobile_counts = [1, 2, 3, 5, 10]
print("n\\m " + "".join(f"{m:>10d}" for m in mobile_counts))
for n in [1, 2, 5, 10, 50]:
    row = [expected_total_time(ChainParams(n, m)) for m in mobile_counts]
    print(f"{n:<4d}" + "".join(f"{v:>10.2f}" for v in row))

# The first phase is a pure waiting game: the single informed static node
# must be paired with any mobile node, which takes n rounds on average,
# independently of how many mobile nodes exist.
n, m = 50, 3
params = ChainParams(n, m)
print(f"\n(n={n}, m={m}) total {expected_total_time(params):.3f} = "
      f"{n} (first contact) + {expected_phase2_time(params):.3f} (spreading)")

# --- closed forms agree with the solver ------------------------------------

print("\nclosed forms vs solver")
for n in [10, 100, 1000]:
    one = n * harmonic(n - 1) + n
    two = two_mobile_time_exact(n)
    three = three_mobile_time_exact(n)
    print(f"  n={n:5d}  m=1: {one:12.3f} ({expected_total_time(ChainParams(n, 1)):12.3f})"
          f"  m=2: {two:12.3f} ({expected_total_time(ChainParams(n, 2)):12.3f})"
          f"  m=3: {three:12.3f} ({expected_total_time(ChainParams(n, 3)):12.3f})")

# --- the two-mobile case decomposes into classic problems ------------------
# first contact (mean n), throwing balls into urns until the first
# collision, refilling the remaining urns, and a vanishing n!/n^n term.

print("\ntwo-mobile decomposition (exact identity and the off-by-H variant)")
for n in [2, 10, 100]:
    pair = two_mobile_decomposition(n)
    exact = two_mobile_time_exact(n)
    print(f"  n={n:4d}  exact {exact:10.4f}  corrected {pair.corrected:10.4f}"
          f"  nominal {pair.nominal:10.4f}  (gap {exact - pair.nominal:.4f}"
          f" = harmonic(n-1) = {harmonic(n - 1):.4f})")
