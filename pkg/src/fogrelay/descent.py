"""Steepest descent with finite-difference gradients and constraint projections.

The descent direction is always the negative numerical gradient.  Two
step-size rules are supported: a fixed multiple of the gradient, and an
exact line search (golden section along the normalized direction).  The
mobility and power-budget constraints are enforced by projection after
each step.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .model import POWER_FLOOR_FRACTION, Position

GOLDEN_RATIO_CONJ = (math.sqrt(5.0) - 1.0) / 2.0
DEFAULT_BRACKET_WIDTH = 1e-10

# Algorithm stop on gradient norm; the objective-decrease rule dominates
# in practice.
GRAD_NORM_TOL = 1e-12


class LineSearch(Enum):
    FIXED_STEP = "fixed"
    EXACT = "exact"


@dataclass(frozen=True)
class SdmConfig:
    """Steepest-descent settings.

    ``tol`` is the absolute objective-decrease threshold that defines
    convergence; the iteration count at which the decrease first drops
    below it is the run's convergence value.  ``max_step`` bounds the
    exact line search (None means expand a bracket automatically).
    """

    step_size: float = 1e-3
    grad_step: float = 1e-6
    tol: float = 1e-9
    max_iters: int = 1500
    mobility_limit_m: float = 0.01
    line_search: LineSearch = LineSearch.EXACT
    max_step: float | None = None

    def __post_init__(self):
        if not (self.step_size > 0.0):
            raise ValueError("step_size must be > 0")
        if not (self.grad_step > 0.0):
            raise ValueError("grad_step must be > 0")
        if not (self.tol >= 0.0):
            raise ValueError("tol must be >= 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.mobility_limit_m >= 0.0):
            raise ValueError("mobility_limit_m must be >= 0")
        if self.max_step is not None and not (self.max_step > 0.0):
            raise ValueError("max_step must be > 0 when given")


class CriticalPointKind(Enum):
    LOCAL_MIN = "local_min"
    LOCAL_MAX = "local_max"
    SADDLE = "saddle"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CriticalPointClass:
    kind: CriticalPointKind
    d_value: float


def numerical_gradient(
    f: Callable[[np.ndarray], float],
    point: Sequence[float],
    grad_step: float = 1e-6,
) -> np.ndarray:
    """Central-difference gradient, step h_i = grad_step * max(1, |x_i|)."""
    p = np.asarray(point, dtype=float)
    g = np.empty_like(p)
    for i in range(p.size):
        h = grad_step * max(1.0, abs(p[i]))
        e = np.zeros_like(p)
        e[i] = h
        fp = f(p + e)
        fm = f(p - e)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise ArithmeticError(
                f"non-finite objective near component {i} of {p.tolist()}"
            )
        g[i] = (fp - fm) / (2.0 * h)
    return g


def golden_section(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    width: float = DEFAULT_BRACKET_WIDTH,
) -> float:
    """Golden-section minimizer of f on [lo, hi] to the given bracket width."""
    a, b = lo, hi
    c = b - GOLDEN_RATIO_CONJ * (b - a)
    d = a + GOLDEN_RATIO_CONJ * (b - a)
    fc = f(c)
    fd = f(d)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN_RATIO_CONJ * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN_RATIO_CONJ * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _expand_bracket(phi: Callable[[float], float], start: float = 1.0) -> float:
    """Double an upper step bound until the objective stops improving."""
    hi = start
    f_hi = phi(hi)
    while hi < 1e9:
        f_next = phi(2.0 * hi)
        if f_next >= f_hi:
            return 2.0 * hi
        hi *= 2.0
        f_hi = f_next
    return hi


def exact_line_search(
    f: Callable[[np.ndarray], float],
    point: np.ndarray,
    direction: np.ndarray,
    max_step: float | None = None,
    width: float = DEFAULT_BRACKET_WIDTH,
) -> np.ndarray:
    """Minimize f along ``point + t * direction`` for t >= 0.

    The direction is normalized internally so the search variable is in
    the coordinates' natural units.
    """
    norm = float(np.linalg.norm(direction))
    if norm == 0.0:
        return point.copy()
    d = direction / norm

    def phi(t: float) -> float:
        return f(point + t * d)

    hi = max_step if max_step is not None else _expand_bracket(phi)
    t_best = golden_section(phi, 0.0, hi, width)
    if phi(t_best) > phi(0.0):
        return point.copy()
    return point + t_best * d


def sdm_step(
    f: Callable[[np.ndarray], float],
    point: Sequence[float],
    config: SdmConfig,
    grad: np.ndarray | None = None,
) -> tuple[np.ndarray, float]:
    """One steepest-descent step; returns (new_point, f(new_point)).

    Returns the point unchanged when the gradient norm is at or below the
    stopping threshold.  ``grad`` may pass in a precomputed gradient.
    """
    p = np.asarray(point, dtype=float)
    g = numerical_gradient(f, p, config.grad_step) if grad is None else grad
    if float(np.linalg.norm(g)) <= GRAD_NORM_TOL:
        return p.copy(), f(p)
    if config.line_search is LineSearch.FIXED_STEP:
        new = p - config.step_size * g
    else:
        new = exact_line_search(f, p, -g, config.max_step)
    return new, f(new)


def project_mobility(prev_pos: Position, proposed_pos: Position, iota: float) -> Position:
    """Clip the displacement from prev_pos to at most iota meters."""
    if iota < 0.0:
        raise ValueError("iota must be >= 0")
    dx = proposed_pos.x_m - prev_pos.x_m
    dy = proposed_pos.y_m - prev_pos.y_m
    dist = math.hypot(dx, dy)
    if dist <= iota:
        return proposed_pos
    scale = iota / dist
    return Position(prev_pos.x_m + scale * dx, prev_pos.y_m + scale * dy)


def project_power(p_source_w: float, p_relay_w: float, p_max_w: float) -> tuple[float, float]:
    """Project a power pair onto the full-budget split line.

    Each power is clamped into [floor, p_max - floor] with
    floor = 1e-6 * p_max, then the pair is rescaled so the sum equals
    exactly p_max.  Power control thereafter is one-dimensional in the
    split ratio.
    """
    if not (p_max_w > 0.0):
        raise ValueError("p_max_w must be > 0")
    floor = POWER_FLOOR_FRACTION * p_max_w
    lo, hi = floor, p_max_w - floor
    a = min(max(p_source_w, lo), hi)
    b = min(max(p_relay_w, lo), hi)
    if abs((a + b) - p_max_w) <= 1e-15 * p_max_w and a == p_source_w and b == p_relay_w:
        return p_source_w, p_relay_w
    ratio = a / (a + b)
    ratio = min(max(ratio, POWER_FLOOR_FRACTION), 1.0 - POWER_FLOOR_FRACTION)
    a_new = ratio * p_max_w
    return a_new, p_max_w - a_new


def hessian_dtest(
    f: Callable[[np.ndarray], float],
    point: Sequence[float],
    grad_step: float = 1e-6,
) -> CriticalPointClass:
    """Second-derivative test for a 2-D critical point.

    D = f_xx f_yy - f_xy^2; D > 0 with f_xx > 0 (resp. < 0) classifies a
    local minimum (maximum), D < 0 a saddle.  |D| below 1e-8 of the
    curvature scale is reported inconclusive.
    """
    p = np.asarray(point, dtype=float)
    if p.size != 2:
        raise ValueError("hessian_dtest expects a 2-D point")
    h = math.sqrt(grad_step)
    hx = h * max(1.0, abs(p[0]))
    hy = h * max(1.0, abs(p[1]))
    ex = np.array([hx, 0.0])
    ey = np.array([0.0, hy])
    f0 = f(p)
    fxx = (f(p + ex) - 2.0 * f0 + f(p - ex)) / (hx * hx)
    fyy = (f(p + ey) - 2.0 * f0 + f(p - ey)) / (hy * hy)
    fxy = (f(p + ex + ey) - f(p + ex - ey) - f(p - ex + ey) + f(p - ex - ey)) / (
        4.0 * hx * hy
    )
    for name, v in (("f_xx", fxx), ("f_yy", fyy), ("f_xy", fxy)):
        if not math.isfinite(v):
            raise ArithmeticError(f"non-finite second difference {name} at {p.tolist()}")
    d = fxx * fyy - fxy * fxy
    scale = fxx * fxx + fyy * fyy + fxy * fxy
    if abs(d) < 1e-8 * scale or scale == 0.0:
        return CriticalPointClass(CriticalPointKind.INCONCLUSIVE, d)
    if d < 0.0:
        return CriticalPointClass(CriticalPointKind.SADDLE, d)
    kind = CriticalPointKind.LOCAL_MIN if fxx > 0.0 else CriticalPointKind.LOCAL_MAX
    return CriticalPointClass(kind, d)


@dataclass
class SdmResult:
    """Trace of one descent run.

    ``theta`` is the first iteration index at which the objective decrease
    fell below the tolerance (0 when the starting gradient already met the
    stopping threshold), or max_iters when the decrease never did.
    """

    points: list = field(default_factory=list)
    values: list = field(default_factory=list)
    theta: int = 0

    @property
    def solution(self) -> np.ndarray:
        return self.points[-1]

    @property
    def objective_trace(self) -> list:
        return self.values


def run_sdm(
    f: Callable[[np.ndarray], float],
    start: Sequence[float],
    config: SdmConfig,
    projector: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
) -> SdmResult:
    """Iterate steepest-descent steps (plus optional projection) from start.

    The run stops at the gradient-norm threshold, at the first iteration
    whose objective decrease falls below ``config.tol``, or after
    ``config.max_iters`` iterations, whichever comes first.  Failures in
    the objective are re-raised with the iteration index attached.
    """
    p = np.asarray(start, dtype=float)
    result = SdmResult(points=[p.copy()], values=[f(p)])
    for i in range(1, config.max_iters + 1):
        try:
            g = numerical_gradient(f, p, config.grad_step)
            if float(np.linalg.norm(g)) <= GRAD_NORM_TOL:
                result.theta = i - 1
                return result
            new, f_new = sdm_step(f, p, config, grad=g)
            if projector is not None:
                new = projector(p, new)
                f_new = f(new)
        except ArithmeticError as exc:
            raise ArithmeticError(f"iteration {i}: {exc}") from exc
        result.points.append(new.copy())
        result.values.append(f_new)
        decrease = result.values[-2] - result.values[-1]
        p = new
        if decrease < config.tol:
            result.theta = i
            return result
    result.theta = config.max_iters
    return result
