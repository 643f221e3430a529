"""Slot-by-slot relay design schemes.

Four schemes cover the location/power design space: FLFP keeps both fixed
(baseline), OLFP moves the relay under the per-slot mobility budget, OPFL
re-splits the transmit power budget at a fixed position, and OLOP does
both (one location step, then one power step, per slot).

Each optimizing scheme performs exactly one descent iteration per time
slot, so the mobility constraint applies per iteration and slot indices
double as iteration indices.  Schemes that control power first snap the
power pair onto the full-budget split line, after which power control is
one-dimensional in the split ratio.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import descent
from .descent import LineSearch, SdmConfig, exact_line_search, numerical_gradient
from .model import (
    POWER_FLOOR_FRACTION,
    Position,
    RadioParams,
    RelayState,
    outage_exact_value,
)


class Scheme(Enum):
    FLFP = "flfp"
    OLFP = "olfp"
    OPFL = "opfl"
    OLOP = "olop"

    @property
    def moves_relay(self) -> bool:
        return self in (Scheme.OLFP, Scheme.OLOP)

    @property
    def controls_power(self) -> bool:
        return self in (Scheme.OPFL, Scheme.OLOP)

    @classmethod
    def parse(cls, name: str) -> "Scheme":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown scheme '{name}'") from None


@dataclass(frozen=True)
class Trajectory:
    """Per-slot record of one scheme run.

    ``slots`` holds (slot_index, state, p_out) from slot 1 (the starting
    configuration) to convergence or the slot budget.  ``theta`` counts
    the descent steps that improved the outage by at least the tolerance
    before convergence was declared -- the run's convergence value -- or
    equals the slot budget when the run never converged.
    """

    slots: tuple
    final_outage: float
    theta: int

    @property
    def final_state(self) -> RelayState:
        return self.slots[-1][1]

    @property
    def outages(self) -> list:
        return [p for (_, _, p) in self.slots]


def _position_step(x, y, p_i, p_r, sep, params, config):
    """One mobility-limited descent step on the relay coordinates."""
    f = lambda v: outage_exact_value(v[0], v[1], p_i, p_r, sep, params)
    point = np.array([x, y])
    g = numerical_gradient(f, point, config.grad_step)
    if float(np.linalg.norm(g)) <= descent.GRAD_NORM_TOL:
        return x, y
    if config.line_search is LineSearch.FIXED_STEP:
        proposed = point - config.step_size * g
    else:
        proposed = exact_line_search(f, point, -g, max_step=config.mobility_limit_m)
    clipped = descent.project_mobility(
        Position(x, y), Position(proposed[0], proposed[1]), config.mobility_limit_m
    )
    if f(np.array([clipped.x_m, clipped.y_m])) > f(point):
        return x, y
    return clipped.x_m, clipped.y_m


def _power_step(x, y, rho, p_max, sep, params, config):
    """One descent step on the split ratio rho = P_I / P_max."""
    lo = POWER_FLOOR_FRACTION
    hi = 1.0 - POWER_FLOOR_FRACTION

    def f(r: float) -> float:
        return outage_exact_value(x, y, r * p_max, p_max - r * p_max, sep, params)

    h = config.grad_step * max(1.0, abs(rho))
    g = (f(rho + h) - f(rho - h)) / (2.0 * h)
    if not math.isfinite(g):
        raise ArithmeticError(f"non-finite power gradient at rho={rho}")
    if abs(g) <= descent.GRAD_NORM_TOL:
        return rho
    if config.line_search is LineSearch.FIXED_STEP:
        new = rho - config.step_size * g
    else:
        direction = -1.0 if g > 0.0 else 1.0
        span = (hi - rho) if direction > 0.0 else (rho - lo)
        if span <= 0.0:
            return rho
        t = descent.golden_section(lambda s: f(rho + direction * s), 0.0, span)
        new = rho + direction * t
    new = min(max(new, lo), hi)
    if f(new) > f(rho):
        return rho
    return new


def run_scheme(
    scheme: Scheme,
    params: RadioParams,
    start: RelayState,
    config: SdmConfig,
) -> Trajectory:
    """Run one scheme for up to ``config.max_iters`` time slots.

    The exact closed-form outage is the objective throughout.  Worsening
    proposals are rejected, so the recorded outage sequence is
    non-increasing; the run ends at convergence (per-slot decrease below
    ``config.tol``) or at the slot budget.
    """
    start.validate_budget(params)
    sep = params.separation_m
    k_slots = config.max_iters

    if scheme is Scheme.FLFP:
        p0 = outage_exact_value(
            start.pos.x_m, start.pos.y_m, start.p_source_w, start.p_relay_w, sep, params
        )
        slots = tuple((t, start, p0) for t in range(1, k_slots + 1))
        return Trajectory(slots, p0, k_slots)

    x, y = start.pos.x_m, start.pos.y_m
    if scheme.controls_power:
        p_i, p_r = descent.project_power(start.p_source_w, start.p_relay_w, params.p_max_w)
    else:
        p_i, p_r = start.p_source_w, start.p_relay_w

    def record(t, px, py, pi, pr, p):
        return (t, RelayState(Position(px, py), pi, pr), p)

    p = outage_exact_value(x, y, p_i, p_r, sep, params)
    slots = [record(1, x, y, p_i, p_r, p)]
    theta = k_slots
    for t in range(2, k_slots + 1):
        if scheme.moves_relay:
            x, y = _position_step(x, y, p_i, p_r, sep, params, config)
        if scheme.controls_power:
            rho = _power_step(x, y, p_i / params.p_max_w, params.p_max_w, sep, params, config)
            p_i = rho * params.p_max_w
            p_r = params.p_max_w - p_i
        p_new = outage_exact_value(x, y, p_i, p_r, sep, params)
        slots.append(record(t, x, y, p_i, p_r, p_new))
        if p - p_new < config.tol:
            theta = t - 2
            break
        p = p_new
    return Trajectory(tuple(slots), slots[-1][2], theta)


def improvement_pct(baseline: Trajectory, other: Trajectory) -> float:
    """Percent outage improvement of ``other`` over ``baseline``."""
    if not baseline.slots or not other.slots:
        raise ValueError("both trajectories must be non-empty")
    if baseline.final_outage == 0.0:
        raise ZeroDivisionError("baseline outage is zero")
    return 100.0 * (baseline.final_outage - other.final_outage) / baseline.final_outage
