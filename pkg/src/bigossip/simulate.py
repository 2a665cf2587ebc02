"""Monte Carlo engine for the rumor process.

Two event models share one code path: in ``rounds`` mode time is the event
count, in ``poisson`` mode every mobile node activates as an independent
Poisson process with rate ``rate``, so the superposed event stream has
exponential gaps with rate ``n_mobile * rate`` and each event picks a
uniform mobile node, exactly as in ``rounds`` mode.

Determinism contract
--------------------
Replica ``i`` of a batch draws from xoshiro256++ seeded with four
SplitMix64 outputs, where the replica seed is::

    mix_replica_seed(master_seed, i) =
        splitmix64_fin(master_seed + (i + 1) * 0x9E3779B97F4A7C15  mod 2**64)

(``splitmix64_fin`` is the standard SplitMix64 output finalizer).  Streams
are therefore a pure function of ``(master_seed, i)`` and results are
independent of execution order or parallel schedule.  Per event the draw
order is: exponential gap (poisson mode only), static-side uniform,
mobile-side uniform.

The default ("fast") path tracks only the informed counts ``(a, b)`` and
draws two Bernoulli variables per event, which is distribution-identical
to picking node indices because nodes are exchangeable.  The ``node_level``
path keeps per-node informed flags and draws explicit indices; it exists
to validate the fast path and for topology experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from numba import njit

from .chain import ChainParams
from .errors import CapacityError, DomainError

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_TWO53_INV = 1.1102230246251565e-16  # 2**-53


def mix_replica_seed(master_seed: int, index: int) -> int:
    """Documented mixing of ``(master_seed, replica_index)`` into a 64-bit seed."""
    mask = (1 << 64) - 1
    z = (master_seed + (index + 1) * 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return z ^ (z >> 31)


@njit(cache=True)
def _mix64(master: _U64, index: _U64) -> _U64:
    z = master + (index + _U64(1)) * _GOLDEN
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


@njit(cache=True)
def _xoshiro_init(seed: _U64) -> np.ndarray:
    state = np.empty(4, dtype=np.uint64)
    z = seed
    for k in range(4):
        z = z + _GOLDEN
        s = (z ^ (z >> _U64(30))) * _MIX1
        s = (s ^ (s >> _U64(27))) * _MIX2
        state[k] = s ^ (s >> _U64(31))
    return state


@njit(cache=True)
def _next_uniform(state: np.ndarray) -> float:
    # xoshiro256++, mapped to [0, 1) with 53 random bits
    s0, s1, s2, s3 = state[0], state[1], state[2], state[3]
    result = s0 + s3
    result = ((result << _U64(23)) | (result >> _U64(41))) + s0
    t = s1 << _U64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = (s3 << _U64(45)) | (s3 >> _U64(19))
    state[0], state[1], state[2], state[3] = s0, s1, s2, s3
    return float(result >> _U64(11)) * _TWO53_INV


@njit(cache=True)
def _replica_fast(n, m, seed, poisson, mean_gap, stride, record):
    state = _xoshiro_init(seed)
    a, b = 1, 0
    steps = 0
    t = 0.0
    phase1 = 0
    boundary = np.zeros(m, dtype=np.int64)
    cap = 256 if record else 1
    traj = np.empty((cap, 3))
    k = 0
    if record:
        traj[0, 0] = 0.0
        traj[0, 1] = 1.0
        traj[0, 2] = 0.0
        k = 1
    while a < n or b < m:
        steps += 1
        if poisson:
            t -= math.log(1.0 - _next_uniform(state)) * mean_gap
        informed_static = _next_uniform(state) < a / n
        informed_mobile = _next_uniform(state) < b / m
        if informed_static and not informed_mobile:
            boundary[b] = a
            b += 1
            if b == 1:
                phase1 = steps
        elif informed_mobile and not informed_static:
            a += 1
        if record and (steps % stride == 0 or (a == n and b == m)):
            if k == cap:
                cap *= 2
                grown = np.empty((cap, 3))
                grown[:k] = traj[:k]
                traj = grown
            traj[k, 0] = t if poisson else float(steps)
            traj[k, 1] = float(a)
            traj[k, 2] = float(b)
            k += 1
    if not poisson:
        t = float(steps)
    return steps, t, phase1, boundary, traj[:k].copy()


@njit(cache=True)
def _replica_node_level(n, m, seed, poisson, mean_gap):
    state = _xoshiro_init(seed)
    informed_static = np.zeros(n, dtype=np.bool_)
    informed_static[0] = True
    informed_mobile = np.zeros(m, dtype=np.bool_)
    a, b = 1, 0
    steps = 0
    t = 0.0
    phase1 = 0
    boundary = np.zeros(m, dtype=np.int64)
    while a < n or b < m:
        steps += 1
        if poisson:
            t -= math.log(1.0 - _next_uniform(state)) * mean_gap
        i = int(_next_uniform(state) * n)
        j = int(_next_uniform(state) * m)
        if informed_static[i] and not informed_mobile[j]:
            informed_mobile[j] = True
            boundary[b] = a
            b += 1
            if b == 1:
                phase1 = steps
        elif informed_mobile[j] and not informed_static[i]:
            informed_static[i] = True
            a += 1
    if not poisson:
        t = float(steps)
    return steps, t, phase1, boundary


@njit(cache=True)
def _batch_fast(n, m, master, replicas, poisson, mean_gap,
                steps_out, times_out, phase1_out, boundary_counts):
    for i in range(replicas):
        state = _xoshiro_init(_mix64(master, _U64(i)))
        a, b = 1, 0
        steps = 0
        t = 0.0
        phase1 = 0
        while a < n or b < m:
            steps += 1
            if poisson:
                t -= math.log(1.0 - _next_uniform(state)) * mean_gap
            informed_static = _next_uniform(state) < a / n
            informed_mobile = _next_uniform(state) < b / m
            if informed_static and not informed_mobile:
                boundary_counts[b, a] += 1
                b += 1
                if b == 1:
                    phase1 = steps
            elif informed_mobile and not informed_static:
                a += 1
        steps_out[i] = steps
        times_out[i] = t if poisson else float(steps)
        phase1_out[i] = phase1


@dataclass(frozen=True)
class SimConfig:
    """Batch configuration; see the module docstring for the RNG contract."""

    params: ChainParams
    replicas: int
    master_seed: int
    mode: str = "rounds"            # "rounds" | "poisson"
    rate: float = 1.0               # per-mobile activation rate (poisson mode)
    record_trajectories: bool = False
    trajectory_stride: Optional[int] = None  # None -> auto
    node_level: bool = False
    max_trajectory_entries: int = 50_000_000

    def __post_init__(self) -> None:
        if self.replicas < 1:
            raise DomainError(f"need at least one replica, got {self.replicas}")
        if self.mode not in ("rounds", "poisson"):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.mode == "poisson" and not self.rate > 0.0:
            raise DomainError(f"activation rate must be positive, got {self.rate}")
        if self.trajectory_stride is not None and self.trajectory_stride < 1:
            raise DomainError(f"stride must be >= 1, got {self.trajectory_stride}")
        if self.record_trajectories and self.node_level:
            raise DomainError("trajectory recording is only supported on the fast path")

    @property
    def stride(self) -> int:
        if self.trajectory_stride is not None:
            return self.trajectory_stride
        n, m = self.params.n_static, self.params.n_mobile
        return 1 if max(n, m) <= 1000 else math.ceil((n + m) / 2000)


@dataclass(frozen=True, eq=False)
class ReplicaResult:
    steps: int
    completion_time: float  # equals steps in rounds mode
    phase1_steps: int
    boundary_static_counts: np.ndarray  # index = mobile count before the increment
    trajectory: Optional[np.ndarray] = None  # rows (time, a, b)


class StatBlock(NamedTuple):
    mean: float
    variance: float  # unbiased; 0.0 for a single replica
    stderr: float
    q01: float
    q25: float
    q50: float
    q75: float
    q99: float


def _stat_block(values: np.ndarray) -> StatBlock:
    count = len(values)
    mean = float(np.mean(values))
    variance = float(np.var(values, ddof=1)) if count > 1 else 0.0
    stderr = math.sqrt(variance / count)
    q = np.percentile(values, [1, 25, 50, 75, 99])
    return StatBlock(mean, variance, stderr, *(float(v) for v in q))


@dataclass(frozen=True, eq=False)
class SimSummary:
    replica_count: int
    mode: str
    rate: float
    steps: StatBlock
    completion_time: StatBlock
    boundary_counts: np.ndarray  # shape (n_mobile, n_static + 1)

    def to_dict(self) -> dict:
        return {
            "replica_count": self.replica_count,
            "mode": self.mode,
            "rate": self.rate,
            "steps": self.steps._asdict(),
            "completion_time": self.completion_time._asdict(),
            "boundary_counts": self.boundary_counts.tolist(),
        }


@dataclass(frozen=True, eq=False)
class BatchResult:
    config: SimConfig
    summary: SimSummary
    trajectories: Optional[list] = None


def run_replica(
    params: ChainParams,
    seed: int,
    mode: str = "rounds",
    rate: float = 1.0,
    record_trajectory: bool = False,
    stride: int = 1,
    node_level: bool = False,
) -> ReplicaResult:
    """Run one replica from state ``(1, 0)`` to absorption.

    ``seed`` feeds the replica stream directly (no mixing); identical
    arguments always produce an identical result.
    """
    if mode not in ("rounds", "poisson"):
        raise DomainError(f"unknown mode {mode!r}")
    if mode == "poisson" and not rate > 0.0:
        raise DomainError(f"activation rate must be positive, got {rate}")
    if stride < 1:
        raise DomainError(f"stride must be >= 1, got {stride}")
    n, m = params.n_static, params.n_mobile
    poisson = mode == "poisson"
    mean_gap = 1.0 / (m * rate) if poisson else 0.0
    seed_u = _U64(seed & ((1 << 64) - 1))
    if node_level:
        if record_trajectory:
            raise DomainError("trajectory recording is only supported on the fast path")
        steps, t, phase1, boundary = _replica_node_level(
            n, m, seed_u, poisson, mean_gap
        )
        traj = None
    else:
        steps, t, phase1, boundary, traj_arr = _replica_fast(
            n, m, seed_u, poisson, mean_gap, stride, record_trajectory
        )
        traj = traj_arr if record_trajectory else None
    return ReplicaResult(int(steps), float(t), int(phase1), boundary, traj)


def run_batch(config: SimConfig) -> BatchResult:
    """Run ``config.replicas`` independent replicas and aggregate them.

    Replica ``i`` uses ``mix_replica_seed(master_seed, i)``, so the result
    depends only on the configuration, never on scheduling.
    """
    n, m = config.params.n_static, config.params.n_mobile
    poisson = config.mode == "poisson"
    mean_gap = 1.0 / (m * config.rate) if poisson else 0.0
    master = _U64(config.master_seed & ((1 << 64) - 1))
    boundary_counts = np.zeros((m, n + 1), dtype=np.int64)
    trajectories: Optional[list] = [] if config.record_trajectories else None

    if config.record_trajectories or config.node_level:
        steps_arr = np.empty(config.replicas, dtype=np.int64)
        times_arr = np.empty(config.replicas)
        phase1_arr = np.empty(config.replicas, dtype=np.int64)
        budget = config.max_trajectory_entries
        for i in range(config.replicas):
            rep = run_replica(
                config.params,
                mix_replica_seed(config.master_seed, i),
                mode=config.mode,
                rate=config.rate,
                record_trajectory=config.record_trajectories,
                stride=config.stride,
                node_level=config.node_level,
            )
            steps_arr[i] = rep.steps
            times_arr[i] = rep.completion_time
            phase1_arr[i] = rep.phase1_steps
            for b, a in enumerate(rep.boundary_static_counts):
                boundary_counts[b, a] += 1
            if trajectories is not None:
                budget -= len(rep.trajectory)
                if budget < 0:
                    raise CapacityError(
                        "trajectory recording exceeds "
                        f"{config.max_trajectory_entries} entries; raise the "
                        "cap, the stride, or lower the replica count"
                    )
                trajectories.append(rep.trajectory)
    else:
        steps_arr = np.empty(config.replicas, dtype=np.int64)
        times_arr = np.empty(config.replicas)
        phase1_arr = np.empty(config.replicas, dtype=np.int64)
        _batch_fast(
            n, m, master, config.replicas, poisson, mean_gap,
            steps_arr, times_arr, phase1_arr, boundary_counts,
        )

    summary = SimSummary(
        replica_count=config.replicas,
        mode=config.mode,
        rate=config.rate if poisson else 0.0,
        steps=_stat_block(steps_arr),
        completion_time=_stat_block(times_arr),
        boundary_counts=boundary_counts,
    )
    return BatchResult(config, summary, trajectories)


class BatchSamples(NamedTuple):
    steps: np.ndarray
    completion_times: np.ndarray
    phase1_steps: np.ndarray


def batch_samples(config: SimConfig) -> BatchSamples:
    """Raw per-replica outcomes for ``config`` (fast path, no recording).

    Runs the same streams as :func:`run_batch`, so replica ``i`` here is
    replica ``i`` there.
    """
    n, m = config.params.n_static, config.params.n_mobile
    poisson = config.mode == "poisson"
    mean_gap = 1.0 / (m * config.rate) if poisson else 0.0
    master = _U64(config.master_seed & ((1 << 64) - 1))
    steps_arr = np.empty(config.replicas, dtype=np.int64)
    times_arr = np.empty(config.replicas)
    phase1_arr = np.empty(config.replicas, dtype=np.int64)
    boundary_counts = np.zeros((m, n + 1), dtype=np.int64)
    _batch_fast(
        n, m, master, config.replicas, poisson, mean_gap,
        steps_arr, times_arr, phase1_arr, boundary_counts,
    )
    return BatchSamples(steps_arr, times_arr, phase1_arr)


def normalized_trajectories(batch: BatchResult) -> list:
    """Map recorded paths to proportions with a per-mobile-node time unit.

    Each row becomes ``(t_norm, a / n_static, b / n_mobile)`` where one
    normalized time unit is one expected activation per mobile node:
    event count over ``n_mobile`` in rounds mode, elapsed time times
    ``rate`` in poisson mode.
    """
    if batch.trajectories is None:
        return []
    n = batch.config.params.n_static
    m = batch.config.params.n_mobile
    scale = batch.config.rate if batch.config.mode == "poisson" else 1.0 / m
    out = []
    for traj in batch.trajectories:
        path = np.empty_like(traj)
        path[:, 0] = traj[:, 0] * scale
        path[:, 1] = traj[:, 1] / n
        path[:, 2] = traj[:, 2] / m
        out.append(path)
    return out
