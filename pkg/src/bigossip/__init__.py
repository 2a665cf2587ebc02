"""Push-pull rumor spreading between static and mobile nodes.

Exact solver (:mod:`bigossip.chain`), closed-form and asymptotic formulas
(:mod:`bigossip.formulas`), a reproducible Monte Carlo engine
(:mod:`bigossip.simulate`), and the deterministic mean-field limit
(:mod:`bigossip.fluid`).
"""

__version__ = "0.1.0"

from .chain import (
    ChainParams,
    HittingTimeTable,
    PhaseBoundaryDistribution,
    State,
    StepDistribution,
    diagonal_extrema,
    expected_phase2_time,
    expected_stay_rounds,
    expected_total_time,
    hitting_time_table,
    joint_boundary_distribution,
    phase_boundary_distribution,
    stay_probability,
    step_distribution,
)
from .errors import CapacityError, ConvergenceError, DomainError
from .fluid import (
    FluidCurve,
    FluidParams,
    fluid_phase_curve,
    fluid_trajectory,
    lambert_w0,
    phase_curve_residuals,
    sup_deviation,
)
from .formulas import (
    EULER_GAMMA,
    AsymptoticEstimate,
    BoundPair,
    DecompositionPair,
    birthday_expectation_asymptotic,
    birthday_expectation_exact,
    coupon_expectation,
    distributed_expectation,
    equal_population_bounds,
    factorial_ratio,
    first_boundary_pmf,
    first_boundary_pmf_all,
    harmonic,
    joint_boundary_pmf,
    joint_boundary_pmf_all,
    three_mobile_decomposition_term,
    three_mobile_time_asymptotic,
    three_mobile_time_exact,
    two_mobile_decomposition,
    two_mobile_time_asymptotic,
    two_mobile_time_exact,
)
from .simulate import (
    BatchResult,
    BatchSamples,
    ReplicaResult,
    SimConfig,
    SimSummary,
    StatBlock,
    batch_samples,
    mix_replica_seed,
    normalized_trajectories,
    run_batch,
    run_replica,
)

__all__ = [name for name in dir() if not name.startswith("_")]
