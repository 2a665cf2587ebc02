"""Continuous time: independently activating mobile nodes.

In the round-based model exactly one contact happens per round, so adding
mobile nodes cannot shorten wall-clock time.  Letting every mobile node
activate as an independent Poisson process with rate lam superposes into
one rate-(m lam) event stream whose events pick a uniform mobile node --
the round model again, run at m lam events per time unit.  Expected
completion time is therefore (expected rounds) / (m lam), and more mobile
nodes now genuinely help.
"""

import math

import numpy as np

from bigossip import (
    ChainParams,
    SimConfig,
    distributed_expectation,
    expected_total_time,
    run_batch,
)

n = 200
rate = 1.0
print(f"completion time with {n} static nodes, activation rate {rate}")
print("mobile   rounds (events)   time = rounds/(m*rate)")
for m in (1, 2, 3, 10, 50, 200):
    steps = expected_total_time(ChainParams(n, m))
    print(f"{m:>6d} {steps:17.2f} {distributed_expectation(n, m, rate):17.4f}")

# Simulated continuous time agrees with the rescaled solver.
print("\nsimulation check (20000 replicas each)")
for m in (2, 50):
    config = SimConfig(ChainParams(n, m), replicas=20_000, master_seed=8,
                       mode="poisson", rate=rate)
    summary = run_batch(config).summary
    target = distributed_expectation(n, m, rate)
    z = (summary.completion_time.mean - target) / summary.completion_time.stderr
    print(f"  m={m:4d}: simulated {summary.completion_time.mean:9.4f}  "
          f"solver {target:9.4f}  (z = {z:+.2f})")

# With equal populations the time settles near 2 ln(n) / rate: doubling
# both sides buys almost nothing beyond the logarithm.
print("\nequal populations approach 2 ln n / rate")
for size in (100, 300, 1000):
    exact = distributed_expectation(size, size, rate)
    print(f"  n=m={size:5d}: time {exact:8.4f}   2 ln n = {2 * math.log(size):8.4f}"
          f"   ratio {exact / (2 * math.log(size)):.4f}")
