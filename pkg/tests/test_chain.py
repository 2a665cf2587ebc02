import numpy as np
import pytest

from bigossip.chain import (
    ChainParams,
    State,
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
from bigossip.errors import CapacityError, DomainError
from bigossip.formulas import first_boundary_pmf_all, harmonic

from conftest import boundary_law_rational, exact_times_rational


class TestStepDistribution:
    def test_start_state(self):
        dist = step_distribution(ChainParams(5, 3), (1, 0))
        assert dist.p_up == pytest.approx(1 / 5, abs=0)
        assert dist.p_right == 0.0

    def test_absorbing_state(self):
        dist = step_distribution(ChainParams(7, 4), (7, 4))
        assert dist.p_stay == 1.0
        assert dist.p_right == 0.0 and dist.p_up == 0.0

    def test_interior_state(self):
        dist = step_distribution(ChainParams(2, 2), (1, 1))
        assert dist == (0.25, 0.25, 0.5)

    def test_simplex_is_exact(self):
        for n, m in [(1, 1), (2, 3), (5, 4), (9, 2)]:
            params = ChainParams(n, m)
            for a in range(1, n + 1):
                for b in range(0, m + 1):
                    dist = step_distribution(params, (a, b))
                    assert dist.p_right + dist.p_up + dist.p_stay == 1.0
                    assert min(dist) >= 0.0

    @pytest.mark.parametrize("state", [(0, 0), (0, 1), (3, 1), (1, 3), (-1, 0), (1, -1)])
    def test_out_of_range_state(self, state):
        with pytest.raises(DomainError):
            step_distribution(ChainParams(2, 2), state)

    @pytest.mark.parametrize("n,m", [(0, 1), (1, 0), (-2, 3)])
    def test_bad_params(self, n, m):
        with pytest.raises(DomainError):
            ChainParams(n, m)


class TestExpectedTimes:
    def test_hand_values(self):
        assert expected_total_time(ChainParams(1, 1)) == 1.0
        assert expected_total_time(ChainParams(2, 1)) == 4.0
        assert expected_total_time(ChainParams(2, 2)) == 6.0

    def test_against_rational_oracle(self):
        for n, m in [(1, 1), (2, 3), (4, 4), (7, 2), (3, 8), (6, 5)]:
            exact, _ = exact_times_rational(n, m)
            assert expected_total_time(ChainParams(n, m)) == pytest.approx(
                float(exact), rel=1e-12
            )

    def test_phase_split_is_exact(self):
        for n, m in [(2, 2), (10, 3), (41, 7)]:
            params = ChainParams(n, m)
            assert expected_total_time(params) == n + expected_phase2_time(params)

    def test_phase2_hand_value(self):
        assert expected_phase2_time(ChainParams(2, 2)) == 4.0

    def test_phase2_symmetry(self):
        assert expected_phase2_time(ChainParams(5, 3)) == pytest.approx(
            expected_phase2_time(ChainParams(3, 5)), rel=1e-12
        )
        for n in range(1, 41):
            for m in range(1, n + 1):
                lhs = expected_phase2_time(ChainParams(n, m))
                rhs = expected_phase2_time(ChainParams(m, n))
                assert lhs == pytest.approx(rhs, rel=1e-9)
        rng = np.random.default_rng(7)
        for n, m in rng.integers(1, 201, size=(20, 2)):
            lhs = expected_phase2_time(ChainParams(int(n), int(m)))
            rhs = expected_phase2_time(ChainParams(int(m), int(n)))
            assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_single_mobile_is_coupon_collection(self):
        for n in [1, 2, 3, 10, 97, 1000]:
            expected = n * harmonic(n - 1)
            assert expected_phase2_time(ChainParams(n, 1)) == pytest.approx(
                expected, rel=1e-12, abs=1e-12
            )

    def test_capacity_refusal(self):
        with pytest.raises(CapacityError):
            expected_total_time(ChainParams(10_001, 10_001))


class TestHittingTimeTable:
    def test_entries(self):
        table = hitting_time_table(ChainParams(3, 2))
        _, oracle = exact_times_rational(3, 2)
        for (a, b), value in oracle.items():
            assert table.remaining((a, b)) == pytest.approx(float(value), rel=1e-12)
        assert table.remaining((3, 2)) == 0.0
        assert table.total == pytest.approx(173 / 18, rel=1e-14)
        assert table.remaining((1, 0)) == table.total

    def test_nonabsorbing_entries_at_least_one(self):
        table = hitting_time_table(ChainParams(6, 4))
        inner = table.phase2[1:, 1:]
        assert inner[-1, -1] == 0.0
        mask = np.ones_like(inner, dtype=bool)
        mask[-1, -1] = False
        assert np.all(inner[mask] >= 1.0)

    def test_unreachable_states_rejected(self):
        table = hitting_time_table(ChainParams(4, 2))
        with pytest.raises(DomainError):
            table.remaining((2, 0))


class TestBoundaryDistribution:
    def test_two_mobile_two_static(self):
        dist = phase_boundary_distribution(ChainParams(2, 2), 1)
        assert dist.prob(1) == pytest.approx(0.5, abs=1e-15)
        assert dist.prob(2) == pytest.approx(0.5, abs=1e-15)

    def test_normalization(self):
        for n in [1, 2, 5, 30, 200, 1000]:
            dist = phase_boundary_distribution(ChainParams(n, 2), 1)
            assert dist.total() == pytest.approx(1.0, abs=1e-12)

    def test_first_mass_is_reciprocal(self):
        for n in [1, 3, 17, 250]:
            dist = phase_boundary_distribution(ChainParams(n, 2), 1)
            assert dist.prob(1) == pytest.approx(1 / n, rel=1e-13)

    def test_matches_closed_form(self):
        for n in [1, 2, 3, 10, 50, 200, 1000]:
            probs = phase_boundary_distribution(ChainParams(n, 2), 1).probs
            closed = first_boundary_pmf_all(n)
            nonzero = closed > 0
            rel = np.abs(probs[nonzero] - closed[nonzero]) / closed[nonzero]
            assert float(rel.max()) < 1e-12

    def test_matches_rational_oracle(self):
        for n, m, phase in [(6, 4, 1), (6, 4, 3), (5, 3, 2), (9, 2, 1)]:
            probs = phase_boundary_distribution(ChainParams(n, m), phase).probs
            oracle = boundary_law_rational(n, m, phase)
            for a in range(1, n + 1):
                assert probs[a] == pytest.approx(float(oracle[a]), abs=1e-15)

    @pytest.mark.parametrize("phase", [0, 2, -1])
    def test_phase_out_of_range(self, phase):
        with pytest.raises(DomainError):
            phase_boundary_distribution(ChainParams(5, 2), phase)

    def test_joint_hand_values(self):
        joint = joint_boundary_distribution(ChainParams(2, 3))
        assert joint[1, 1] == pytest.approx(2 / 9, rel=1e-14)
        assert joint[1, 2] == pytest.approx(4 / 9, rel=1e-14)
        assert joint[2, 2] == pytest.approx(1 / 3, rel=1e-14)

    def test_joint_normalization_and_marginals(self):
        for n in [1, 2, 7, 40]:
            params = ChainParams(n, 3)
            joint = joint_boundary_distribution(params)
            assert joint.sum() == pytest.approx(1.0, abs=1e-12)
            first = phase_boundary_distribution(params, 1).probs
            second = phase_boundary_distribution(params, 2).probs
            assert np.allclose(joint.sum(axis=1), first, atol=1e-13)
            assert np.allclose(joint.sum(axis=0), second, atol=1e-13)

    def test_joint_requires_three_mobile(self):
        with pytest.raises(DomainError):
            joint_boundary_distribution(ChainParams(5, 2))


class TestStayQuantities:
    def test_stay_along_top_row(self):
        for n in [3, 10, 50]:
            for j in range(1, n + 1):
                assert stay_probability(ChainParams(n, n), (j, n)) == pytest.approx(
                    j / n, rel=1e-13
                )

    def test_absorbing_stays_forever(self):
        assert stay_probability(ChainParams(4, 6), (4, 6)) == 1.0
        with pytest.raises(DomainError):
            expected_stay_rounds(ChainParams(4, 6), (4, 6))

    def test_interior_values(self):
        assert stay_probability(ChainParams(2, 2), (1, 1)) == 0.5
        assert expected_stay_rounds(ChainParams(2, 2), (1, 1)) == 2.0

    def test_instant_leave(self):
        # from (1, 0) with a single static node the first pairing always informs
        assert expected_stay_rounds(ChainParams(1, 3), (1, 0)) == 1.0

    def test_diagonal_holding_time(self):
        for n in [4, 9, 30]:
            for j in range(1, n):
                expected = n * n / (2 * j * (n - j))
                assert expected_stay_rounds(ChainParams(n, n), (j, j)) == pytest.approx(
                    expected, rel=1e-12
                )


class TestDiagonalExtrema:
    def test_examples(self):
        assert diagonal_extrema(ChainParams(10, 10), 8) == (State(4, 4), State(1, 7))
        assert diagonal_extrema(ChainParams(10, 10), 7) == (State(3, 4), State(1, 6))
        assert diagonal_extrema(ChainParams(4, 4), 2) == (State(1, 1), State(1, 1))

    def test_requires_equal_sizes(self):
        with pytest.raises(DomainError):
            diagonal_extrema(ChainParams(4, 5), 3)

    @pytest.mark.parametrize("total", [0, 1, 8, 9])
    def test_diagonal_range(self, total):
        with pytest.raises(DomainError):
            diagonal_extrema(ChainParams(4, 4), total)

    def test_op_matches_formula(self):
        for n in (2, 3, 7, 10, 33, 60, 120, 500):
            params = ChainParams(n, n)
            for total in range(2, 2 * n):
                arg_max, arg_min = diagonal_extrema(params, total)
                assert arg_max == State(total // 2, total - total // 2)
                assert arg_min == State(max(1, total - n), min(n, total - 1))

    def test_lemma_exhaustive_up_to_500(self):
        # independent vectorized scan of every anti-diagonal for every size
        for n in range(2, 501):
            for total in range(2, 2 * n):
                lo, hi = max(1, total - n), min(n, total - 1)
                idx = np.arange(lo, hi + 1, dtype=np.int64)
                weight = (total - idx) * (n - idx) + (n - total + idx) * idx
                assert int(idx[np.argmin(weight)]) == total // 2
                assert int(idx[np.argmax(weight)]) == lo
