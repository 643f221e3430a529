"""Seeded experiment runners producing CSV-ready tables.

Every runner is a pure function of its config: identical configs produce
identical tables, row for row.  Tables carry the column header and plain
python values; formatting/IO lives with the callers.
"""

from dataclasses import dataclass

from .config import ExperimentConfig
from .gridsearch import brute_force_min, min_outage_vs_separation, power_sweep
from .model import (
    Position,
    RelayState,
    outage_approx,
    outage_exact,
    outage_monte_carlo,
)
from .schemes import Scheme, Trajectory, improvement_pct, run_scheme
from .selection import convergence_value, deploy_relays, run_phases


@dataclass(frozen=True)
class TableData:
    """One output table: target file stem, header, and rows."""

    name: str
    header: tuple
    rows: tuple

    @property
    def filename(self) -> str:
        return f"{self.name}.csv"


def _trajectory_rows(traj: Trajectory) -> tuple:
    return tuple(
        (t, s.pos.x_m, s.pos.y_m, s.p_source_w, s.p_relay_w, p)
        for (t, s, p) in traj.slots
    )


def run_optimize(cfg: ExperimentConfig, scheme: Scheme) -> dict:
    """Trajectory of one scheme plus summary against the no-op baseline."""
    params = cfg.radio()
    sdm = cfg.sdm()
    start = cfg.start_state()
    traj = run_scheme(scheme, params, start, sdm)
    baseline = traj if scheme is Scheme.FLFP else run_scheme(Scheme.FLFP, params, start, sdm)
    improvement = improvement_pct(baseline, traj)
    trajectory = TableData(
        name=f"trajectory_{scheme.value}",
        header=("slot", "x_m", "y_m", "p_source_w", "p_relay_w", "p_out"),
        rows=_trajectory_rows(traj),
    )
    summary = TableData(
        name=f"summary_{scheme.value}",
        header=("final_outage", "theta", "improvement_vs_flfp_pct"),
        rows=((traj.final_outage, traj.theta, improvement),),
    )
    return {
        "trajectory": trajectory,
        "summary": summary,
        "final_outage": traj.final_outage,
        "theta": traj.theta,
        "improvement_vs_flfp_pct": improvement,
        "flfp_final_outage": baseline.final_outage,
    }


def run_sweep_power(cfg: ExperimentConfig) -> dict:
    """Outage vs relay transmit power at the jointly optimized position."""
    params = cfg.radio()
    traj = run_scheme(Scheme.OLOP, params, cfg.start_state(), cfg.sdm())
    pos = traj.final_state.pos
    p_r, p_out = power_sweep(params, pos, cfg.sweep_points, cfg.sweep_rho_floor)
    table = TableData(
        name="sweep_power",
        header=("p_relay_w", "p_out"),
        rows=tuple(zip(p_r.tolist(), p_out.tolist())),
    )
    return {"table": table, "position": (pos.x_m, pos.y_m)}


def run_sweep_separation(cfg: ExperimentConfig) -> dict:
    """Brute-force minimum and jointly optimized outage per separation."""
    params = cfg.radio()
    spec = cfg.grid()
    minima = min_outage_vs_separation(params, spec, list(cfg.l_values))
    rows = []
    for sep, p_min in minima:
        params_l = params.with_separation(sep)
        start = RelayState(
            Position(sep / 2.0, cfg.start_y_m), cfg.initial_power_w(), cfg.initial_power_w()
        )
        traj = run_scheme(Scheme.OLOP, params_l, start, cfg.sdm())
        rows.append((sep, p_min, traj.final_outage))
    table = TableData(
        name="sweep_separation",
        header=("L_m", "p_out_min", "p_out_olop"),
        rows=tuple(rows),
    )
    return {"table": table}


def run_brute_force(cfg: ExperimentConfig) -> dict:
    """Exhaustive grid minimum under the configured scenario."""
    params = cfg.radio()
    best, p_out = brute_force_min(params, cfg.grid())
    table = TableData(
        name="brute_force",
        header=("x_m", "y_m", "p_source_w", "p_relay_w", "p_out", "n_positions", "n_power"),
        rows=(
            (
                best.pos.x_m,
                best.pos.y_m,
                best.p_source_w,
                best.p_relay_w,
                p_out,
                cfg.n_positions,
                cfg.n_power,
            ),
        ),
    )
    return {"table": table, "p_out": p_out}


def run_select(cfg: ExperimentConfig) -> dict:
    """Deploy candidates, compute convergence values, run the phase protocol.

    With ``inject_thetas`` set, the per-relay optimization runs are skipped
    and the given counters are used directly (the convergence table is then
    empty).
    """
    params = cfg.radio()
    sdm = cfg.sdm()
    scheme = Scheme.parse(cfg.select_scheme)
    candidates = deploy_relays(cfg.n_relays, cfg.separation_m, cfg.seed)
    deployment = TableData(
        name="deployment",
        header=("id", "x_m", "y_m"),
        rows=tuple((c.id, c.pos.x_m, c.pos.y_m) for c in candidates),
    )
    convergence_rows = []
    if cfg.inject_thetas is not None:
        for c, theta in zip(candidates, cfg.inject_thetas):
            c.theta = theta
            c.theta_initial = theta
    else:
        p0 = cfg.initial_power_w()
        for c in candidates:
            theta, traj = convergence_value(c, scheme, params, sdm, (p0, p0))
            c.theta = theta
            c.theta_initial = theta
            convergence_rows.extend((c.id, t, p) for (t, _, p) in traj.slots)
    convergence = TableData(
        name="convergence",
        header=("id", "slot", "p_out"),
        rows=tuple(convergence_rows),
    )
    logs, fairness = run_phases(
        candidates, cfg.n_phases, cts_delay=cfg.cts_delay, tick_budget=cfg.tick_budget
    )
    ids = sorted(c.id for c in candidates)
    phases = TableData(
        name="phases",
        header=("phase", "selected_id") + tuple(f"counter_{i}" for i in ids),
        rows=tuple(
            (log.phase_index, log.selected_ids[0])
            + tuple(log.counters_after[i] for i in ids)
            for log in logs
        ),
    )
    fairness_table = TableData(
        name="fairness",
        header=("id", "times_selected", "jain_index"),
        rows=tuple(
            (i, fairness.times_selected[i], fairness.jain_index) for i in ids
        ),
    )
    return {
        "deployment": deployment,
        "convergence": convergence,
        "phases": phases,
        "fairness": fairness_table,
        "thetas": {c.id: c.theta_initial for c in candidates},
        "jain_index": fairness.jain_index,
    }


# Scenario grid for the estimator-comparison table: positions along the
# link (alternating offset) crossed with power splits; the last split
# pushes the relay power low enough to leave the approximation's validity
# region, so the flag column is exercised.
_MC_POSITIONS = ((5.0, 0.0), (15.0, 5.0), (25.0, 0.0), (35.0, 5.0), (45.0, 0.0))
_MC_SPLITS = (0.1, 0.3, 0.5, 0.7, 0.9, 0.9999)


def run_montecarlo(cfg: ExperimentConfig) -> dict:
    """Exact / approximate / Monte Carlo outage across scenario cells."""
    params = cfg.radio()
    sep = params.separation_m
    rows = []
    cell = 0
    for (fx, fy) in _MC_POSITIONS:
        x = fx * sep / 50.0
        y = fy * sep / 50.0
        for rho in _MC_SPLITS:
            state = RelayState(Position(x, y), rho * params.p_max_w,
                               (1.0 - rho) * params.p_max_w)
            exact = outage_exact(state, sep, params)
            approx = outage_approx(state, sep, params)
            mc = outage_monte_carlo(state, sep, params, cfg.mc_samples,
                                    seed=cfg.seed + cell)
            rows.append(
                (
                    x, y, rho,
                    exact.p_out,
                    approx.p_out,
                    int(approx.valid),
                    mc.p_out,
                    mc.mc_stderr,
                )
            )
            cell += 1
    table = TableData(
        name="montecarlo",
        header=("x_m", "y_m", "rho", "p_exact", "p_approx", "approx_valid",
                "p_mc", "mc_stderr"),
        rows=tuple(rows),
    )
    return {"table": table}
