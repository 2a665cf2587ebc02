"""Deterministic verification suites behind ``bigossip verify``.

Each suite re-derives a family of identities, bounds, or statistical
agreements with the solver and reports one line per check.  ``INFO``
lines document known, expected discrepancies (they never fail a suite);
``FAIL`` lines drive the process exit code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fluid, formulas, simulate
from .chain import ChainParams, expected_total_time, phase_boundary_distribution

PASS, FAIL, INFO = "PASS", "FAIL", "INFO"

SUITES = ("t2", "t3", "nn", "fluid", "poisson", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def _check(name: str, ok: bool, detail: str) -> CheckResult:
    return CheckResult(name, PASS if ok else FAIL, detail)


def _decay_grid(n_max: int, points: tuple) -> list:
    grid = [n for n in points if n <= max(n_max, points[1])]
    return grid if len(grid) >= 2 else list(points[:2])


def suite_t2(n_max: int = 2000) -> list:
    checks = []

    hand = {(1, 1): 1.0, (2, 1): 4.0, (2, 2): 6.0}
    worst = max(
        abs(expected_total_time(ChainParams(n, m)) - v)
        for (n, m), v in hand.items()
    )
    checks.append(_check("small-chain solver oracle", worst <= 1e-12,
                         f"max residual {worst:.3e} (tol 1e-12)"))

    top = min(n_max, 10_000)
    worst = 0.0
    for n in range(1, top + 1):
        ref = n * formulas.harmonic(n - 1) + n
        worst = max(worst, abs(expected_total_time(ChainParams(n, 1)) - ref) / ref)
    checks.append(_check(f"one-mobile closed form, n<={top}", worst <= 1e-9,
                         f"max rel residual {worst:.3e} (tol 1e-9)"))

    worst = 0.0
    for n in range(1, n_max + 1):
        dp = expected_total_time(ChainParams(n, 2))
        worst = max(worst, abs(formulas.two_mobile_time_exact(n) - dp) / dp)
    checks.append(_check(f"two-mobile series equals solver, n<={n_max}", worst <= 1e-9,
                         f"max rel residual {worst:.3e} (tol 1e-9)"))

    grid = _decay_grid(n_max, (64, 128, 256, 512, 1024, 2048, 4096))
    errs = [abs(expected_total_time(ChainParams(n, 2))
                - formulas.two_mobile_time_asymptotic(n).value) for n in grid]
    mono = all(b <= a for a, b in zip(errs, errs[1:]))
    checks.append(_check("two-mobile expansion error decays", mono and errs[-1] < 1e-2,
                         f"errors {['%.2e' % e for e in errs]} over n={grid}"))

    worst = 0.0
    for n in range(1, n_max + 1):
        pair = formulas.two_mobile_decomposition(n)
        exact = formulas.two_mobile_time_exact(n)
        worst = max(worst, abs(pair.corrected - exact) / exact)
    checks.append(_check(f"corrected decomposition equals series, n<={n_max}",
                         worst <= 1e-9, f"max rel residual {worst:.3e} (tol 1e-9)"))

    pair = formulas.two_mobile_decomposition(n_max)
    exact = formulas.two_mobile_time_exact(n_max)
    gap = exact - pair.nominal
    checks.append(CheckResult(
        "nominal decomposition residual", INFO,
        f"exact - nominal = {gap:.9f} at n={n_max}; harmonic(n-1) = "
        f"{formulas.harmonic(n_max - 1):.9f} (documented discrepancy)"))

    worst = 0.0
    for n in range(2, min(n_max, 500) + 1):
        pmf = formulas.first_boundary_pmf_all(n)
        hs = formulas._harmonic_prefix(n)
        ks = np.arange(2, n + 1)
        # collect-until-collision phase of length k, then refill n-k+1 urns
        two_phase = float(np.dot(pmf[ks - 1], ks + n * hs[n - 1:0:-1])) + pmf[n] * n
        worst = max(worst, abs(two_phase - formulas.coupon_expectation(n)))
    checks.append(_check("two-phase coupon identity, n<=500", worst <= 1e-9,
                         f"max residual {worst:.3e} (tol 1e-9)"))

    worst = 0.0
    for n in (1, 2, 3, 10, 100, min(n_max, 1000)):
        probs = phase_boundary_distribution(ChainParams(n, 2), 1).probs
        worst = max(worst, abs(probs.sum() - 1.0))
        closed = formulas.first_boundary_pmf_all(n)
        nz = closed > 0
        worst = max(worst, float(np.max(np.abs(probs[nz] - closed[nz]) / closed[nz])))
    checks.append(_check("boundary law normalizes and matches closed form",
                         worst <= 1e-10, f"max residual {worst:.3e} (tol 1e-10)"))

    return checks


def suite_t3(n_max: int = 500) -> list:
    checks = []

    worst = 0.0
    for n in range(1, n_max + 1):
        dp = expected_total_time(ChainParams(n, 3))
        worst = max(worst, abs(formulas.three_mobile_time_exact(n) - dp) / dp)
    checks.append(_check(f"three-mobile series equals solver, n<={n_max}",
                         worst <= 1e-9, f"max rel residual {worst:.3e} (tol 1e-9)"))

    worst = 0.0
    for n in (1, 2, 3, 10, 50, min(n_max, 300)):
        worst = max(worst, abs(formulas.joint_boundary_pmf_all(n).sum() - 1.0))
    checks.append(_check("joint boundary law normalizes", worst <= 1e-10,
                         f"max residual {worst:.3e} (tol 1e-10)"))

    worst = 0.0
    for n in (1, 2, 5, 20, min(n_max, 100)):
        joint = formulas.joint_boundary_pmf_all(n)
        params = ChainParams(n, 3)
        m1 = phase_boundary_distribution(params, 1).probs
        m2 = phase_boundary_distribution(params, 2).probs
        worst = max(worst, float(np.max(np.abs(joint.sum(axis=1) - m1))))
        worst = max(worst, float(np.max(np.abs(joint.sum(axis=0) - m2))))
    checks.append(_check("joint boundary marginals match solver", worst <= 1e-12,
                         f"max residual {worst:.3e} (tol 1e-12)"))

    grid = _decay_grid(n_max, (64, 256, 1024))
    errs = [abs(expected_total_time(ChainParams(n, 3))
                - formulas.three_mobile_time_asymptotic(n).value) for n in grid]
    mono = all(b <= a for a, b in zip(errs, errs[1:]))
    checks.append(_check("three-mobile expansion error decays", mono and errs[-1] < 1e-2,
                         f"errors {['%.2e' % e for e in errs]} over n={grid}"))

    n = min(n_max, 200)
    params = ChainParams(n, 3)
    dp = expected_total_time(params)
    mean1 = phase_boundary_distribution(params, 1).mean()
    mean2 = phase_boundary_distribution(params, 2).mean()
    core = n + 1.5 * mean1 + 0.5 * mean2 + formulas.three_mobile_decomposition_term(n)
    resid_nominal = dp - (core + formulas.coupon_expectation(n - 1))
    resid_partial = dp - (core + n * formulas.harmonic(n - 1))
    checks.append(CheckResult(
        "three-mobile decomposition residual", INFO,
        f"with coupon(n-1): {resid_nominal:+.9f} (= harmonic(n-1) = "
        f"{formulas.harmonic(n - 1):.9f}); with n*harmonic(n-1): "
        f"{resid_partial:+.3e} at n={n}"))
    checks.append(_check(
        "three-mobile decomposition exact under partial-coupon reading",
        abs(resid_partial) <= 1e-6, f"residual {resid_partial:+.3e} (tol 1e-6)"))

    return checks


def suite_nn(n_max: int = 500, slack: float = 5.0) -> list:
    checks = []
    worst_low = math.inf
    worst_high = -math.inf
    for n in range(2, n_max + 1):
        dp = expected_total_time(ChainParams(n, n))
        lo, hi = formulas.equal_population_bounds(n)
        worst_low = min(worst_low, dp - (lo - slack))
        worst_high = max(worst_high, dp - (hi + slack))
    ok = worst_low >= 0.0 and worst_high <= 0.0
    checks.append(_check(
        f"equal-population band with slack {slack}, n<={n_max}", ok,
        f"min margin above lower {worst_low:.3f}, below upper {-worst_high:.3f}"))

    n = n_max
    dp = expected_total_time(ChainParams(n, n))
    normalized = (dp - 2.0 * n * formulas.harmonic(n)) / n
    checks.append(_check(
        f"normalized gap below ln 4 + 0.05 at n={n}",
        normalized <= math.log(4.0) + 0.05,
        f"(solver - 2n harmonic(n))/n = {normalized:.4f}, ln 4 = {math.log(4.0):.4f}"))

    offset = dp - (2.0 * n * formulas.harmonic(n) + math.log(4.0) * n)
    checks.append(CheckResult(
        "upper-envelope offset", INFO,
        f"solver - upper = {offset:+.3f} at n={n} (order-one gap below the envelope)"))
    return checks


def suite_fluid() -> list:
    checks = []

    ws = np.linspace(-1.0, 5.0, 1000)
    back = np.array([fluid.lambert_w0(w * math.exp(w)) for w in ws])
    worst = float(np.max(np.abs(back - ws)))
    checks.append(_check("lambert round trip on [-1, 5]", worst < 1e-10,
                         f"max |W(w e^w) - w| = {worst:.3e} (tol 1e-10)"))

    worst = 0.0
    for alpha, n in ((1.0, 250), (0.1, 1000), (4.0, 125)):
        params = fluid.FluidParams(alpha, n)
        curve = fluid.fluid_trajectory(params, record_stride=100)
        worst = max(worst, float(np.max(fluid.phase_curve_residuals(curve))))
    checks.append(_check("integration matches closed-form phase curve",
                         worst < 1e-6, f"sup residual {worst:.3e} (tol 1e-6)"))

    params = fluid.FluidParams(1.0, 250)
    xs = np.linspace(params.x0, 1.0, 500)
    worst = float(np.max(np.abs(fluid.fluid_phase_curve(params, xs) - xs)))
    checks.append(_check("alpha=1 phase curve is the identity", worst < 1e-9,
                         f"max |y(x) - x| = {worst:.3e} (tol 1e-9)"))

    params = fluid.FluidParams(2.5, 40)
    xs = np.linspace(params.x0, 1.0, 500)
    ys = fluid.fluid_phase_curve(params, xs)
    checks.append(_check("phase curve monotone in x", bool(np.all(np.diff(ys) >= 0.0)),
                         "checked on a 500-point grid at alpha=2.5"))

    coarse = fluid.fluid_trajectory(params, t_max=200.0, dt=0.02)
    fine = fluid.fluid_trajectory(params, t_max=200.0, dt=0.01)
    gap = max(abs(coarse.x[-1] - fine.x[-1]), abs(coarse.y[-1] - fine.y[-1]))
    checks.append(_check("step halving moves the endpoint by < 1e-8", gap < 1e-8,
                         f"endpoint shift {gap:.3e}"))

    return checks


def suite_poisson(seed: int = 42, replicas: int = 20_000) -> list:
    checks = []
    params = ChainParams(100, 100)
    config = simulate.SimConfig(params, replicas=replicas, master_seed=seed,
                                mode="poisson", rate=1.0)
    summary = simulate.run_batch(config).summary
    target = expected_total_time(params) / (100 * 1.0)
    z = (summary.completion_time.mean - target) / summary.completion_time.stderr
    checks.append(_check("poisson completion mean equals solver/(m*rate)",
                         abs(z) <= 4.0,
                         f"mean {summary.completion_time.mean:.4f} vs {target:.4f} "
                         f"(z = {z:+.2f}, limit 4)"))

    ratios = []
    for n in (100, 300):
        cfg = simulate.SimConfig(ChainParams(n, n), replicas=replicas,
                                 master_seed=seed + n, mode="poisson", rate=1.0)
        mean = simulate.run_batch(cfg).summary.completion_time.mean
        ratios.append(mean / (2.0 * math.log(n)))
    ok = all(0.9 <= r <= 1.6 for r in ratios) and ratios[1] < ratios[0]
    checks.append(_check("completion scales like 2 ln n (ratio window, decreasing)",
                         ok, f"ratios {['%.4f' % r for r in ratios]} for n=100, 300"))
    return checks


def run_suite(name: str, n_max: int | None = None, seed: int = 42,
              replicas: int = 20_000) -> list:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
    checks = []
    if name in ("t2", "all"):
        checks += suite_t2(n_max or 2000)
    if name in ("t3", "all"):
        checks += suite_t3(min(n_max, 500) if n_max else 500)
    if name in ("nn", "all"):
        checks += suite_nn(min(n_max, 1000) if n_max else 500)
    if name in ("fluid", "all"):
        checks += suite_fluid()
    if name in ("poisson", "all"):
        checks += suite_poisson(seed=seed, replicas=replicas)
    return checks
