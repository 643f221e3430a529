import numpy as np
import pytest

from fogrelay.descent import LineSearch, SdmConfig
from fogrelay.model import Position, RelayState
from fogrelay.schemes import Scheme, improvement_pct, run_scheme

from references import BASELINE_13DBM_MIDPOINT, P_13DBM_W_REF


@pytest.fixture(scope="module")
def quick_sdm():
    return SdmConfig(max_iters=300)


@pytest.fixture(scope="module")
def low_power_start():
    return RelayState(Position(25.0, 0.0), P_13DBM_W_REF, P_13DBM_W_REF)


@pytest.fixture(scope="module")
def quick_trajs(params, low_power_start, quick_sdm):
    return {
        s: run_scheme(s, params, low_power_start, quick_sdm) for s in Scheme
    }


def test_scheme_parse():
    assert Scheme.parse("OLOP") is Scheme.OLOP
    with pytest.raises(ValueError):
        Scheme.parse("nope")


def test_flfp_flat_and_never_converges(params, low_power_start):
    cfg = SdmConfig(max_iters=50)
    traj = run_scheme(Scheme.FLFP, params, low_power_start, cfg)
    assert len(traj.slots) == 50
    assert traj.theta == 50
    outages = traj.outages
    assert all(p == outages[0] for p in outages)
    assert outages[0] == pytest.approx(BASELINE_13DBM_MIDPOINT, rel=1e-10)
    assert traj.final_state == low_power_start


def test_slot_indices_and_final(quick_trajs):
    for traj in quick_trajs.values():
        idx = [t for (t, _, _) in traj.slots]
        assert idx[0] == 1
        assert all(b == a + 1 for a, b in zip(idx, idx[1:]))
        assert idx[-1] <= 300
        assert traj.final_outage == traj.slots[-1][2]


def test_traces_non_increasing(quick_trajs):
    for traj in quick_trajs.values():
        p = traj.outages
        assert all(a - b >= -1e-15 for a, b in zip(p, p[1:]))


def test_dominance_ordering(quick_trajs):
    f = {s: quick_trajs[s].final_outage for s in Scheme}
    slack = 1e-12
    assert f[Scheme.OLOP] <= f[Scheme.OLFP] + slack
    assert f[Scheme.OLFP] <= f[Scheme.FLFP] + slack
    assert f[Scheme.OLOP] <= f[Scheme.OPFL] + slack
    assert f[Scheme.OPFL] <= f[Scheme.FLFP] + slack


def test_mobility_feasible_every_slot(quick_trajs, quick_sdm):
    iota = quick_sdm.mobility_limit_m
    for traj in quick_trajs.values():
        states = [s for (_, s, _) in traj.slots]
        for a, b in zip(states, states[1:]):
            d = np.hypot(b.pos.x_m - a.pos.x_m, b.pos.y_m - a.pos.y_m)
            assert d <= iota + 1e-12


def test_power_conservation(params, quick_trajs):
    p_max = params.p_max_w
    for scheme in (Scheme.OPFL, Scheme.OLOP):
        for (_, s, _) in quick_trajs[scheme].slots:
            assert s.p_source_w + s.p_relay_w == pytest.approx(p_max, rel=1e-12)
    for scheme in (Scheme.FLFP, Scheme.OLFP):
        for (_, s, _) in quick_trajs[scheme].slots:
            assert s.p_source_w == P_13DBM_W_REF
            assert s.p_relay_w == P_13DBM_W_REF


def test_position_frozen_when_fixed_location(quick_trajs):
    for scheme in (Scheme.FLFP, Scheme.OPFL):
        for (_, s, _) in quick_trajs[scheme].slots:
            assert (s.pos.x_m, s.pos.y_m) == (25.0, 0.0)


def test_relay_drifts_toward_destination(quick_trajs):
    final = quick_trajs[Scheme.OLFP].final_state.pos
    assert final.x_m > 25.0
    assert abs(final.y_m) < 1e-9


def test_zero_mobility_matches_baseline(params, low_power_start):
    cfg = SdmConfig(max_iters=40, mobility_limit_m=0.0)
    moving = run_scheme(Scheme.OLFP, params, low_power_start, cfg)
    frozen = run_scheme(Scheme.FLFP, params, low_power_start, cfg)
    assert moving.final_outage == frozen.final_outage
    assert all(p == frozen.final_outage for p in moving.outages)


def test_fixed_point_start_converges_immediately(params, quick_sdm):
    settled = run_scheme(
        Scheme.OPFL,
        params,
        RelayState(Position(25.0, 0.0), P_13DBM_W_REF, P_13DBM_W_REF),
        quick_sdm,
    ).final_state
    again = run_scheme(Scheme.OPFL, params, settled, quick_sdm)
    assert again.theta == 0


def test_deterministic(params, low_power_start):
    cfg = SdmConfig(max_iters=120)
    a = run_scheme(Scheme.OLOP, params, low_power_start, cfg)
    b = run_scheme(Scheme.OLOP, params, low_power_start, cfg)
    assert a.slots == b.slots
    assert a.theta == b.theta


def test_fixed_step_mode_runs(params, low_power_start):
    cfg = SdmConfig(max_iters=30, line_search=LineSearch.FIXED_STEP, tol=0.0)
    traj = run_scheme(Scheme.OLOP, params, low_power_start, cfg)
    p = traj.outages
    assert all(a - b >= -1e-15 for a, b in zip(p, p[1:]))


def test_invalid_start_rejected(params, quick_sdm):
    over_budget = RelayState(Position(25, 0), params.p_max_w, params.p_max_w)
    with pytest.raises(ValueError, match="budget"):
        run_scheme(Scheme.OLOP, params, over_budget, quick_sdm)


def test_improvement_pct():
    from fogrelay.schemes import Trajectory

    state = RelayState(Position(1, 1), 0.1, 0.1)
    base = Trajectory(((1, state, 0.5),), 0.5, 3)
    same = Trajectory(((1, state, 0.5),), 0.5, 3)
    halved = Trajectory(((1, state, 0.25),), 0.25, 3)
    assert improvement_pct(base, same) == 0.0
    assert improvement_pct(base, halved) == 50.0
    zero = Trajectory(((1, state, 0.0),), 0.0, 3)
    with pytest.raises(ZeroDivisionError):
        improvement_pct(zero, halved)
