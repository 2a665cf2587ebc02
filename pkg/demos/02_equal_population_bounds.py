"""Equal populations: the expected time hugs its upper envelope.

With n static and n mobile nodes the expected spreading time sits between
2n*harmonic(n) + 2 ln n and 2n*harmonic(n) + ln(4) n, both up to an
additive constant.  The sweep below shows the exact values tracking the
upper envelope closely, the feature that makes the two-sided bound useful.
"""

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from bigossip import ChainParams, equal_population_bounds, expected_total_time, harmonic

sizes = np.arange(2, 401)
exact = np.array([expected_total_time(ChainParams(int(n), int(n))) for n in sizes])
lower = np.array([equal_population_bounds(int(n)).lower for n in sizes])
upper = np.array([equal_population_bounds(int(n)).upper for n in sizes])

print("n      exact        lower        upper    exact-upper")
for n in (2, 10, 50, 100, 200, 400):
    i = n - 2
    print(f"{n:<5d}{exact[i]:12.2f}{lower[i]:12.2f}{upper[i]:12.2f}{exact[i]-upper[i]:12.3f}")

# The offset below the upper envelope stays order-one (it drifts very
# slowly, about -2.1 - 0.65 ln n), while both envelopes grow like n ln n.
offset = exact - upper
print(f"\noffset range over the sweep: [{offset.min():.3f}, {offset.max():.3f}]")

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.plot(sizes, exact, "k-", lw=1.5, label="exact expected rounds")
ax.plot(sizes, lower, "r--", lw=1, label="lower envelope")
ax.plot(sizes, upper, "r-.", lw=1, label="upper envelope")
ax.set_xlabel("population size n (static = mobile)")
ax.set_ylabel("expected rounds")
ax.legend()
fig.tight_layout()

out = "demos/output/equal_population_bounds.png"
import os

os.makedirs("demos/output", exist_ok=True)
fig.savefig(out, dpi=130)
print(f"wrote {out}")
