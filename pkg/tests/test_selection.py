import numpy as np
import pytest

from fogrelay.descent import SdmConfig
from fogrelay.model import Position
from fogrelay.schemes import Scheme
from fogrelay.selection import (
    RelayCandidate,
    SelectionState,
    convergence_value,
    deploy_relays,
    jain_index,
    run_phase,
    run_phases,
)

from references import P_13DBM_W_REF, SEMICIRCLE_MEAN_Y_50M


def candidates_with(thetas):
    out = []
    for i, t in enumerate(thetas, start=1):
        c = RelayCandidate(id=i, pos=Position(25.0, 1.0))
        c.theta = t
        c.theta_initial = t
        out.append(c)
    return out


class TestDeploy:
    def test_inside_region(self):
        for seed in (0, 1, 99):
            (c,) = deploy_relays(1, 50.0, seed)
            assert c.pos.y_m >= 0.0
            assert (c.pos.x_m - 25.0) ** 2 + c.pos.y_m ** 2 <= 25.0 ** 2

    def test_deterministic(self):
        a = deploy_relays(4, 50.0, 7)
        b = deploy_relays(4, 50.0, 7)
        assert [(c.pos.x_m, c.pos.y_m) for c in a] == [
            (c.pos.x_m, c.pos.y_m) for c in b
        ]

    def test_streams_independent_of_count(self):
        # adding a relay must not move the earlier ones
        three = deploy_relays(3, 50.0, 13)
        five = deploy_relays(5, 50.0, 13)
        for a, b in zip(three, five):
            assert (a.pos.x_m, a.pos.y_m) == (b.pos.x_m, b.pos.y_m)

    def test_area_uniform_mean_height(self):
        pts = deploy_relays(100000, 50.0, 123)
        mean_y = float(np.mean([c.pos.y_m for c in pts]))
        assert mean_y == pytest.approx(SEMICIRCLE_MEAN_Y_50M, rel=0.01)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            deploy_relays(0, 50.0, 1)


class TestConvergenceValue:
    def test_nearer_destination_converges_faster(self, params):
        cfg = SdmConfig(max_iters=800)
        powers = (P_13DBM_W_REF, P_13DBM_W_REF)
        near = RelayCandidate(id=1, pos=Position(34.0, 0.0))
        far = RelayCandidate(id=2, pos=Position(20.0, 0.0))
        t_near, _ = convergence_value(near, Scheme.OLFP, params, cfg, powers)
        t_far, _ = convergence_value(far, Scheme.OLFP, params, cfg, powers)
        assert t_near < t_far
        assert t_near <= 800 and t_far <= 800

    def test_fixed_point_gives_zero(self, params):
        cfg = SdmConfig(max_iters=300)
        powers = (P_13DBM_W_REF, P_13DBM_W_REF)
        seed_candidate = RelayCandidate(id=1, pos=Position(25.0, 0.0))
        _, traj = convergence_value(seed_candidate, Scheme.OPFL, params, cfg, powers)
        settled = RelayCandidate(id=2, pos=Position(25.0, 0.0))
        final = traj.final_state
        theta, _ = convergence_value(
            settled, Scheme.OPFL, params, cfg, (final.p_source_w, final.p_relay_w)
        )
        assert theta == 0


class TestRunPhase:
    def test_worked_example_two_phases(self):
        cands = candidates_with([36, 11, 7, 63])
        state = SelectionState(candidates=cands)
        log1 = run_phase(state, tick_budget=5)
        assert log1.selected_ids[0] == 3
        assert log1.counters_before == {1: 36, 2: 11, 3: 7, 4: 63}
        assert log1.counters_after == {1: 31, 2: 6, 3: 7, 4: 58}
        log2 = run_phase(state, tick_budget=5)
        assert log2.selected_ids[0] == 2
        # previous winner holds, new winner recomputes, others drain
        assert log2.counters_after == {1: 26, 2: 11, 3: 7, 4: 53}

    def test_selected_attains_minimum(self):
        rng = np.random.default_rng(31)
        cands = candidates_with(rng.integers(5, 80, size=6).tolist())
        state = SelectionState(candidates=cands)
        for _ in range(50):
            log = run_phase(state, tick_budget=5)
            low = min(log.counters_before.values())
            for sid in log.selected_ids:
                assert log.counters_before[sid] == low

    def test_counters_never_negative_and_floor(self):
        cands = candidates_with([3, 50])
        state = SelectionState(candidates=cands)
        for _ in range(30):
            log = run_phase(state, tick_budget=7)
            assert all(v >= 1 for v in log.counters_after.values())

    def test_recompute_restores_initial(self):
        cands = candidates_with([12, 40])
        state = SelectionState(candidates=cands)
        for _ in range(20):
            log = run_phase(state, tick_budget=5)
            winner = log.selected_ids[0]
            initial = next(c.theta_initial for c in cands if c.id == winner)
            assert log.counters_after[winner] == initial

    def test_tie_round_robin(self):
        cands = candidates_with([10, 10])
        state = SelectionState(candidates=cands)
        selected = [run_phase(state, tick_budget=5).selected_ids[0] for _ in range(4)]
        assert selected == [1, 2, 1, 2]
        # both tied candidates are listed in the schedule
        state2 = SelectionState(candidates=candidates_with([10, 10]))
        log = run_phase(state2, tick_budget=5)
        assert set(log.selected_ids) == {1, 2}

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            run_phase(SelectionState(candidates=[]), 5)


class TestRunPhases:
    def test_identical_relays_perfect_rotation(self):
        n, k = 4, 5
        logs, report = run_phases(candidates_with([40] * n), n_phases=k * n)
        assert all(v == k for v in report.times_selected.values())
        assert report.jain_index == pytest.approx(1.0)

    def test_single_candidate_always_selected(self):
        logs, report = run_phases(candidates_with([9]), n_phases=10)
        assert report.times_selected == {1: 10}
        assert report.jain_index == pytest.approx(1.0)

    def test_liveness_within_theta_budget(self):
        thetas = [10, 7, 9, 30]
        logs, report = run_phases(candidates_with(thetas), n_phases=sum(thetas))
        assert all(v >= 1 for v in report.times_selected.values())

    def test_deterministic(self):
        a = run_phases(candidates_with([14, 9, 22]), n_phases=40)
        b = run_phases(candidates_with([14, 9, 22]), n_phases=40)
        assert a[0] == b[0]
        assert a[1] == b[1]

    def test_validation(self):
        with pytest.raises(ValueError):
            run_phases(candidates_with([5]), n_phases=0)
        with pytest.raises(ValueError):
            run_phases(candidates_with([5]), n_phases=1, cts_delay=-1)


def test_jain_index_values():
    assert jain_index([5, 5, 5, 5]) == pytest.approx(1.0)
    assert jain_index([10, 0, 0, 0]) == pytest.approx(0.25)
    assert jain_index([0, 0]) == 0.0
    assert jain_index([3, 1]) == pytest.approx(16.0 / 20.0)
