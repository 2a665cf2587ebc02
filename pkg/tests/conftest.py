"""Shared fixtures and independent oracles for the test suite."""

from fractions import Fraction

import pytest

from bigossip.chain import ChainParams, expected_total_time
from bigossip.fluid import FluidParams, fluid_trajectory
from bigossip.simulate import SimConfig, run_batch, run_replica


def exact_times_rational(n: int, m: int):
    """Absorption-time table computed in exact rational arithmetic.

    Independent oracle for the float solver: same chain, but a dict-based
    backward recursion over Fractions with no shared code.  Returns
    ``(total_from_start, table)`` where ``table[(a, b)]`` is the expected
    remaining steps from ``(a, b)``.
    """
    table = {}
    for b in range(m, 0, -1):
        for a in range(n, 0, -1):
            if a == n and b == m:
                table[(a, b)] = Fraction(0)
                continue
            p_right = Fraction(b, m) * Fraction(n - a, n)
            p_up = Fraction(m - b, m) * Fraction(a, n)
            acc = Fraction(1)
            if p_right:
                acc += p_right * table[(a + 1, b)]
            if p_up:
                acc += p_up * table[(a, b + 1)]
            table[(a, b)] = acc / (p_right + p_up)
    return n + table[(1, 1)], table


def boundary_law_rational(n: int, m: int, phase: int):
    """Phase-boundary law via exact enumeration of the jump chain."""
    mass = {1: Fraction(1)}
    for row in range(1, phase + 1):
        up = {}
        flow = Fraction(0)
        for a in range(1, n + 1):
            total = mass.get(a, Fraction(0)) + flow
            p_right = Fraction(row, m) * Fraction(n - a, n)
            p_up = Fraction(m - row, m) * Fraction(a, n)
            q_up = p_up / (p_right + p_up)
            up[a] = total * q_up
            flow = total * (1 - q_up)
        mass = up
    return mass


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timed tests measure the algorithms."""
    expected_total_time(ChainParams(3, 3))
    run_replica(ChainParams(3, 2), seed=1, record_trajectory=True)
    run_replica(ChainParams(3, 2), seed=1, mode="poisson", rate=1.0)
    run_replica(ChainParams(3, 2), seed=1, node_level=True)
    run_batch(SimConfig(ChainParams(3, 2), replicas=2, master_seed=1))
    run_batch(SimConfig(ChainParams(3, 2), replicas=2, master_seed=1,
                        mode="poisson", rate=1.0))
    fluid_trajectory(FluidParams(1.0, 10), t_max=1.0, dt=0.01)
