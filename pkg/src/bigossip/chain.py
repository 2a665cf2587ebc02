"""Exact quantities for the bipartite push-pull rumor chain.

The population has ``n_static`` static nodes and ``n_mobile`` mobile nodes;
exactly one static node starts informed.  Each round draws one static and
one mobile node independently and uniformly at random, and if exactly one
of the pair is informed the other learns the rumor.  The pair
``(a, b)`` of informed static / informed mobile counts is then a Markov
chain started at ``(1, 0)`` and absorbed at ``(n_static, n_mobile)``.

Every function here is deterministic: expectations and boundary laws are
computed by dynamic programming / forward propagation on the state
lattice, exact up to float64 rounding.  No sampling is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .errors import CapacityError, DomainError

#: Refuse lattices with more than this many (a, b) cells.
MAX_CELLS = 100_000_000


@dataclass(frozen=True)
class ChainParams:
    """Population sizes of the bipartite contact graph."""

    n_static: int
    n_mobile: int

    def __post_init__(self) -> None:
        if self.n_static < 1 or self.n_mobile < 1:
            raise DomainError(
                f"population sizes must be >= 1, got "
                f"({self.n_static}, {self.n_mobile})"
            )

    @property
    def cells(self) -> int:
        return self.n_static * self.n_mobile


class State(NamedTuple):
    a: int  # informed static nodes
    b: int  # informed mobile nodes


class StepDistribution(NamedTuple):
    p_right: float  # (a, b) -> (a + 1, b)
    p_up: float     # (a, b) -> (a, b + 1)
    p_stay: float   # complement


def _check_state(params: ChainParams, state) -> State:
    a, b = state
    if not (1 <= a <= params.n_static) or not (0 <= b <= params.n_mobile):
        raise DomainError(
            f"state ({a}, {b}) outside lattice for "
            f"({params.n_static}, {params.n_mobile})"
        )
    return State(int(a), int(b))


def _check_capacity(params: ChainParams) -> None:
    if params.cells > MAX_CELLS:
        raise CapacityError(
            f"lattice has {params.cells} cells, exceeding the "
            f"{MAX_CELLS} cell budget"
        )


def step_distribution(params: ChainParams, state) -> StepDistribution:
    """One-round transition probabilities out of ``state``.

    A right move needs an informed mobile node paired with an uninformed
    static node; an up move needs the converse.  ``p_stay`` is defined as
    the exact complement, so the three probabilities always sum to 1.
    """
    a, b = _check_state(params, state)
    n, m = params.n_static, params.n_mobile
    p_right = (b / m) * ((n - a) / n)
    p_up = ((m - b) / m) * (a / n)
    return StepDistribution(p_right, p_up, 1.0 - (p_right + p_up))


def stay_probability(params: ChainParams, state) -> float:
    """Probability that a round leaves ``state`` unchanged."""
    return step_distribution(params, state).p_stay


def expected_stay_rounds(params: ChainParams, state) -> float:
    """Mean number of rounds spent at ``state``, counting the leaving step.

    The holding time is geometric, so this equals ``1 / (1 - p_stay)``.
    Undefined at the absorbing state.
    """
    dist = step_distribution(params, state)
    leave = dist.p_right + dist.p_up
    if leave == 0.0:
        raise DomainError("holding time is infinite at the absorbing state")
    return 1.0 / leave


@njit(cache=True)
def _phase2_table(n, m):
    # Backward DP over the reachable rectangle [1, n] x [1, m].  The row
    # a = n + 1 / column b = m + 1 stay zero and are only ever multiplied
    # by a zero probability.
    table = np.zeros((n + 2, m + 2))
    for b in range(m, 0, -1):
        for a in range(n, 0, -1):
            if a == n and b == m:
                continue
            p_right = (b / m) * ((n - a) / n)
            p_up = ((m - b) / m) * (a / n)
            table[a, b] = (
                1.0 + p_right * table[a + 1, b] + p_up * table[a, b + 1]
            ) / (p_right + p_up)
    return table


@njit(cache=True)
def _phase2_start_value(n, m):
    # Same DP with O(n) memory: roll a single column over b.
    older = np.zeros(n + 2)
    cur = np.zeros(n + 2)
    for b in range(m, 0, -1):
        for a in range(n, 0, -1):
            if a == n and b == m:
                cur[a] = 0.0
                continue
            p_right = (b / m) * ((n - a) / n)
            p_up = ((m - b) / m) * (a / n)
            cur[a] = (1.0 + p_right * cur[a + 1] + p_up * older[a]) / (
                p_right + p_up
            )
        older, cur = cur, older
    return older[1]


@dataclass(frozen=True, eq=False)
class HittingTimeTable:
    """Expected remaining steps for every reachable state.

    ``phase2[a, b]`` holds the expectation from ``(a, b)`` with
    ``1 <= a <= n_static`` and ``1 <= b <= n_mobile``; the start state
    ``(1, 0)`` adds the geometric first-contact time ``n_static``.
    """

    params: ChainParams
    phase2: np.ndarray

    def remaining(self, state) -> float:
        a, b = _check_state(self.params, state)
        if b == 0:
            if a != 1:
                raise DomainError(f"state ({a}, 0) with a > 1 is unreachable")
            return self.total
        return float(self.phase2[a, b])

    @property
    def total(self) -> float:
        """Expected steps from the start state ``(1, 0)``."""
        return self.params.n_static + float(self.phase2[1, 1])

    @property
    def phase2_total(self) -> float:
        """Expected steps from the first-contact state ``(1, 1)``."""
        return float(self.phase2[1, 1])


def hitting_time_table(params: ChainParams) -> HittingTimeTable:
    """Solve the full backward DP and return the per-state table."""
    _check_capacity(params)
    table = _phase2_table(params.n_static, params.n_mobile)
    # Keep 1-based indexing: row 0 / column 0 are unused zeros.
    return HittingTimeTable(params, table[:-1, :-1].copy())


def expected_total_time(params: ChainParams) -> float:
    """Expected rounds from ``(1, 0)`` to absorption at ``(n, m)``.

    Equals ``n_static + expected_phase2_time(params)`` exactly: the chain
    can only leave ``(1, 0)`` through ``(1, 1)``, and that jump is
    geometric with success probability ``1 / n_static``.
    """
    return params.n_static + expected_phase2_time(params)


def expected_phase2_time(params: ChainParams) -> float:
    """Expected rounds from the first-contact state ``(1, 1)`` to ``(n, m)``."""
    _check_capacity(params)
    return float(_phase2_start_value(params.n_static, params.n_mobile))


@dataclass(frozen=True, eq=False)
class PhaseBoundaryDistribution:
    """Law of the static count at which the ``phase -> phase + 1`` jump occurs.

    ``probs[a]`` is the probability that the mobile count increments from
    ``phase`` to ``phase + 1`` while exactly ``a`` static nodes are
    informed; index 0 is unused and zero.
    """

    params: ChainParams
    phase: int
    probs: np.ndarray

    def prob(self, a: int) -> float:
        if not 1 <= a <= self.params.n_static:
            raise DomainError(f"static count {a} out of range")
        return float(self.probs[a])

    def total(self) -> float:
        return float(self.probs.sum())

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.probs)), self.probs))


def phase_boundary_distribution(
    params: ChainParams, phase: int
) -> PhaseBoundaryDistribution:
    """Exact boundary law by forward propagation on the jump chain.

    Works for any population sizes; ``phase`` must satisfy
    ``1 <= phase <= n_mobile - 1``.  Within each mobile-count row, mass
    flows right with the conditional jump probability and exits upward
    with its complement; the exit masses of row ``phase`` form the result.
    """
    n, m = params.n_static, params.n_mobile
    if not 1 <= phase <= m - 1:
        raise DomainError(f"phase must lie in [1, {m - 1}], got {phase}")
    mass = np.zeros(n + 1)
    mass[1] = 1.0
    for row in range(1, phase + 1):
        up = np.zeros(n + 1)
        flow = 0.0  # mass arriving from the left within this row
        for a in range(1, n + 1):
            total = mass[a] + flow
            p_right = (row / m) * ((n - a) / n)
            p_up = ((m - row) / m) * (a / n)
            q_up = p_up / (p_right + p_up)
            up[a] = total * q_up
            flow = total * (1.0 - q_up)
        mass = up
    return PhaseBoundaryDistribution(params, phase, mass)


def joint_boundary_distribution(params: ChainParams) -> np.ndarray:
    """Joint law of both boundary static counts for three mobile nodes.

    Returns ``J`` with ``J[a, b]`` the probability that the first mobile
    increment happens at static count ``a`` and the second at ``b``
    (``a <= b``).  Only defined for ``n_mobile == 3``.
    """
    n = params.n_static
    if params.n_mobile != 3:
        raise DomainError("joint boundary law requires exactly 3 mobile nodes")
    first = phase_boundary_distribution(params, 1).probs
    joint = np.zeros((n + 1, n + 1))
    for a in range(1, n + 1):
        w = first[a]
        for b in range(a, n + 1):
            p_right = (2.0 / 3.0) * ((n - b) / n)
            p_up = (1.0 / 3.0) * (b / n)
            q_up = p_up / (p_right + p_up)
            joint[a, b] = w * q_up
            w *= 1.0 - q_up
    return joint


def diagonal_extrema(params: ChainParams, total: int) -> tuple[State, State]:
    """States with the largest / smallest stay probability on ``a + b = total``.

    Requires equal population sizes and ``2 <= total <= 2n - 1`` so both
    coordinates can be >= 1.  Scans the anti-diagonal exhaustively using
    the integer leave weight ``b*(n-a) + (n-b)*a`` (stay probability is
    ``1 - weight/n**2``, so comparisons are exact); ties resolve to the
    lexicographically smallest state.  The maximum always sits at the
    balanced split and the minimum at the extreme split.
    """
    n = params.n_static
    if params.n_mobile != n:
        raise DomainError("diagonal extrema require equal population sizes")
    if not 2 <= total <= 2 * n - 1:
        raise DomainError(f"diagonal sum must lie in [2, {2 * n - 1}], got {total}")
    lo, hi = max(1, total - n), min(n, total - 1)
    best_max = best_min = State(lo, total - lo)
    w_max = w_min = (total - lo) * (n - lo) + (n - total + lo) * lo
    for i in range(lo + 1, hi + 1):
        j = total - i
        w = j * (n - i) + (n - j) * i  # leave weight, in units of 1/n**2
        if w < w_max:
            w_max, best_max = w, State(i, j)
        if w > w_min:
            w_min, best_min = w, State(i, j)
    assert best_max == State(total // 2, total - total // 2)
    assert best_min == State(lo, total - lo)
    return best_max, best_min
