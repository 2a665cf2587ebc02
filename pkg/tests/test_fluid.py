import math

import numpy as np
import pytest
from scipy.special import lambertw as scipy_lambertw

from bigossip.chain import ChainParams
from bigossip.errors import ConvergenceError, DomainError
from bigossip.fluid import (
    FluidParams,
    fluid_phase_curve,
    fluid_trajectory,
    lambert_w0,
    phase_curve_residuals,
    sup_deviation,
)
from bigossip.simulate import SimConfig, normalized_trajectories, run_batch


class TestLambertW:
    def test_anchor_values(self):
        assert lambert_w0(0.0) == 0.0
        assert lambert_w0(-math.exp(-1.0)) == -1.0
        assert lambert_w0(math.e) == pytest.approx(1.0, abs=1e-14)

    def test_round_trip(self):
        ws = np.linspace(-1.0, 5.0, 1000)
        back = np.array([lambert_w0(w * math.exp(w)) for w in ws])
        assert float(np.max(np.abs(back - ws))) < 1e-10

    def test_against_scipy(self):
        grid = np.concatenate([
            np.linspace(-0.367, -0.01, 200),
            np.linspace(0.01, 50.0, 200),
            [1e-9, 1e6, 1e12],
        ])
        ours = np.array([lambert_w0(z) for z in grid])
        ref = scipy_lambertw(grid).real
        rel = np.abs(ours - ref) / np.maximum(np.abs(ref), 1e-300)
        assert float(rel.max()) < 1e-12

    def test_clamp_just_below_branch(self):
        assert lambert_w0(-math.exp(-1.0) - 1e-13) == -1.0

    def test_domain_error(self):
        with pytest.raises(DomainError):
            lambert_w0(-math.exp(-1.0) - 1e-9)
        with pytest.raises(DomainError):
            lambert_w0(float("nan"))


class TestFluidParams:
    def test_properties(self):
        params = FluidParams(4.0, 125)
        assert params.n_static == 500.0
        assert params.x0 == pytest.approx(1 / 500)
        assert params.y0 == pytest.approx(1 / 125)

    @pytest.mark.parametrize("alpha,n", [(0.0, 10), (-1.0, 10), (0.05, 10)])
    def test_validation(self, alpha, n):
        with pytest.raises(DomainError):
            FluidParams(alpha, n)


class TestTrajectory:
    def test_symmetric_case_keeps_coordinates_equal(self):
        curve = fluid_trajectory(FluidParams(1.0, 250))
        assert float(np.max(np.abs(curve.x - curve.y))) < 1e-9

    def test_monotone_and_bounded(self):
        curve = fluid_trajectory(FluidParams(0.1, 1000), record_stride=50)
        for series in (curve.x, curve.y):
            assert np.all(np.diff(series) >= 0.0)
            assert np.all((series >= 0.0) & (series <= 1.0))

    def test_reaches_absorption(self):
        curve = fluid_trajectory(FluidParams(4.0, 125))
        assert 1.0 - min(curve.x[-1], curve.y[-1]) < 1e-9

    def test_step_halving(self):
        coarse = fluid_trajectory(FluidParams(1.0, 250), t_max=500.0, dt=0.02)
        fine = fluid_trajectory(FluidParams(1.0, 250), t_max=500.0, dt=0.01)
        assert abs(coarse.x[-1] - fine.x[-1]) < 1e-8
        assert abs(coarse.y[-1] - fine.y[-1]) < 1e-8

    def test_argument_validation(self):
        params = FluidParams(1.0, 100)
        with pytest.raises(DomainError):
            fluid_trajectory(params, dt=0.0)
        with pytest.raises(DomainError):
            fluid_trajectory(params, t_max=-1.0)
        with pytest.raises(DomainError):
            fluid_trajectory(params, record_stride=0)


class TestPhaseCurve:
    def test_identity_when_alpha_one(self):
        params = FluidParams(1.0, 250)
        xs = np.linspace(params.x0, 1.0, 400)
        assert float(np.max(np.abs(fluid_phase_curve(params, xs) - xs))) < 1e-9

    def test_endpoints(self):
        for alpha, n in ((1.0, 250), (0.1, 1000), (4.0, 125), (2.5, 40)):
            params = FluidParams(alpha, n)
            assert fluid_phase_curve(params, 1.0) == pytest.approx(1.0, abs=1e-12)
            assert fluid_phase_curve(params, params.x0) == pytest.approx(
                params.y0, abs=1e-9
            )

    def test_monotone(self):
        for alpha, n in ((0.1, 1000), (4.0, 125), (2.5, 40)):
            params = FluidParams(alpha, n)
            ys = fluid_phase_curve(params, np.linspace(params.x0, 1.0, 800))
            assert np.all(np.diff(ys) >= -1e-15)

    def test_domain_error(self):
        params = FluidParams(1.0, 100)
        with pytest.raises(DomainError):
            fluid_phase_curve(params, params.x0 - 1e-3)
        with pytest.raises(DomainError):
            fluid_phase_curve(params, 1.001)

    def test_matches_integration(self):
        for alpha, n in ((1.0, 250), (0.1, 1000), (4.0, 125)):
            curve = fluid_trajectory(FluidParams(alpha, n), record_stride=200)
            assert float(np.max(phase_curve_residuals(curve))) < 1e-6


class TestSupDeviation:
    def test_zero_on_curve_samples(self):
        params = FluidParams(1.0, 100)
        xs = np.linspace(params.x0, 1.0, 50)
        path = np.column_stack([xs, fluid_phase_curve(params, xs)])
        assert sup_deviation(path, params) == pytest.approx(0.0, abs=1e-12)

    def test_single_simulated_path_is_close(self):
        cfg = SimConfig(ChainParams(250, 250), replicas=1, master_seed=12,
                        record_trajectories=True)
        path = normalized_trajectories(run_batch(cfg))[0]
        assert sup_deviation(path, FluidParams(1.0, 250)) < 0.15

    def test_concentration_improves_with_size(self):
        medians = []
        for n, stride in ((100, 4), (400, 8)):
            cfg = SimConfig(ChainParams(n, n), replicas=200, master_seed=21,
                            record_trajectories=True, trajectory_stride=stride)
            paths = normalized_trajectories(run_batch(cfg))
            params = FluidParams(1.0, n)
            medians.append(np.median([sup_deviation(p, params) for p in paths]))
        assert medians[1] < medians[0]

    def test_empty_path_rejected(self):
        with pytest.raises(DomainError):
            sup_deviation(np.empty((0, 3)), FluidParams(1.0, 100))
