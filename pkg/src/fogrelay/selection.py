"""Convergence-counter relay selection protocol.

Each candidate relay carries a counter seeded with its convergence value
(the number of improving optimization steps its link needs).  Every
transmission phase the source polls the active set and the minimum
counter wins the phase; ties are served round robin.  After the
destination's clear-to-send arrives, candidates that did not transmit
count down by the elapsed ticks (floored at 1), the relay that transmitted
restarts from its initial convergence value, and the winner of the
*previous* phase holds its counter for one update.  The hold plus the
steady drain of the losers force rotation through the candidate set.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .descent import SdmConfig
from .model import Position, RadioParams, RelayState
from .schemes import Scheme, Trajectory, run_scheme

# Counter ticks elapsed per transmission phase (the worked protocol
# example drains non-selected counters by 5 per phase).
DEFAULT_TICK_BUDGET = 5


class RelayPhaseState(Enum):
    """Radio/counter state of a candidate.

    COUNTING between phases, SELECTED while transmitting, IDLE while a
    non-selected radio waits for the clear-to-send with its counter
    frozen, FROZEN when a counter is held through an update (the previous
    phase's optimal relay skips one decrement).
    """

    COUNTING = "counting"
    FROZEN = "frozen"
    IDLE = "idle"
    SELECTED = "selected"


@dataclass
class RelayCandidate:
    """One deployed relay and its protocol counter."""

    id: int
    pos: Position
    theta: int = 0
    theta_initial: int = 0
    state: RelayPhaseState = RelayPhaseState.COUNTING


@dataclass(frozen=True)
class PhaseLog:
    """Record of one transmission phase."""

    phase_index: int
    selected_ids: tuple
    counters_before: dict
    counters_after: dict


@dataclass(frozen=True)
class FairnessReport:
    times_selected: dict
    jain_index: float


@dataclass
class SelectionState:
    """Protocol bookkeeping across phases."""

    candidates: list
    phase_index: int = 0
    tick: int = 0
    previous_optimal: int | None = None
    last_selected_phase: dict = field(default_factory=dict)


def deploy_relays(n: int, separation_m: float, seed: int) -> list:
    """Sample n candidate positions uniformly over the upper semicircle.

    The semicircle has diameter ``separation_m`` and is centered between
    the endpoints.  Each candidate draws from its own RNG stream derived
    from (seed, id), so adding a relay never perturbs the others.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    radius = separation_m / 2.0
    out = []
    for i in range(1, n + 1):
        rng = np.random.default_rng([seed, i])
        r = radius * math.sqrt(rng.random())
        ang = math.pi * rng.random()
        pos = Position(radius + r * math.cos(ang), r * math.sin(ang))
        out.append(RelayCandidate(id=i, pos=pos))
    return out


def convergence_value(
    candidate: RelayCandidate,
    scheme: Scheme,
    params: RadioParams,
    config: SdmConfig,
    start_powers: tuple | None = None,
) -> tuple[int, Trajectory]:
    """Convergence value of one candidate: run its scheme, return theta.

    Powers start at half the budget each unless overridden.  Returns the
    trajectory alongside theta so callers can log per-slot outage.
    """
    if start_powers is None:
        start_powers = (params.p_max_w / 2.0, params.p_max_w / 2.0)
    start = RelayState(candidate.pos, start_powers[0], start_powers[1])
    try:
        traj = run_scheme(scheme, params, start, config)
    except (ValueError, ArithmeticError) as exc:
        raise RuntimeError(f"relay {candidate.id}: {exc}") from exc
    return traj.theta, traj


def _pick(state: SelectionState) -> list:
    """Minimum-counter candidates, round-robin ordered.

    Ties are ordered least-recently-selected first (never-selected relays
    lead, lowest id breaking residual ties), which alternates equal
    counters across consecutive phases.
    """
    low = min(c.theta for c in state.candidates)
    tied = [c for c in state.candidates if c.theta == low]
    tied.sort(key=lambda c: (state.last_selected_phase.get(c.id, -1), c.id))
    return tied


def run_phase(state: SelectionState, tick_budget: int = DEFAULT_TICK_BUDGET) -> PhaseLog:
    """Execute one transmission phase and apply the counter updates."""
    if not state.candidates:
        raise ValueError("candidate list is empty")
    if tick_budget < 0:
        raise ValueError("tick_budget must be >= 0")
    before = {c.id: c.theta for c in state.candidates}
    tied = _pick(state)
    winner = tied[0]
    state.phase_index += 1
    # transmission window: winner transmits, the rest idle with counters
    # frozen until the clear-to-send
    for c in state.candidates:
        c.state = RelayPhaseState.SELECTED if c.id == winner.id else RelayPhaseState.IDLE
    for c in state.candidates:
        if c.id == winner.id:
            c.theta = c.theta_initial
        elif c.id == state.previous_optimal:
            c.state = RelayPhaseState.FROZEN  # holds through this update
        else:
            c.theta = max(c.theta - tick_budget, 1)
    for c in state.candidates:
        c.state = RelayPhaseState.COUNTING
    log = PhaseLog(
        phase_index=state.phase_index,
        selected_ids=tuple(c.id for c in tied),
        counters_before=before,
        counters_after={c.id: c.theta for c in state.candidates},
    )
    state.last_selected_phase[winner.id] = state.phase_index
    state.previous_optimal = winner.id
    return log


def jain_index(counts: list) -> float:
    """Jain fairness index of per-relay selection counts."""
    total = float(sum(counts))
    if total == 0.0:
        return 0.0
    return total * total / (len(counts) * float(sum(c * c for c in counts)))


def run_phases(
    candidates: list,
    n_phases: int,
    cts_delay: int = 5,
    tick_budget: int = DEFAULT_TICK_BUDGET,
) -> tuple[list, FairnessReport]:
    """Run a sequence of phases and report selection fairness.

    Between a phase's transmission start and its clear-to-send (cts_delay
    ticks later) the non-selected relays sit idle with frozen counters;
    the counter updates are applied when the clear-to-send arrives.
    """
    if n_phases < 1:
        raise ValueError("n_phases must be >= 1")
    if cts_delay < 0:
        raise ValueError("cts_delay must be >= 0")
    state = SelectionState(candidates=candidates)
    logs = []
    for _ in range(n_phases):
        log = run_phase(state, tick_budget)
        state.tick += cts_delay  # clear-to-send closes the phase
        logs.append(log)
    counts = {c.id: 0 for c in state.candidates}
    for log in logs:
        counts[log.selected_ids[0]] += 1
    report = FairnessReport(counts, jain_index(list(counts.values())))
    return logs, report
