"""Two-hop amplify-and-forward link model and outage evaluators.

Geometry: the source sits at (0, 0), the destination at (L, 0), and the
relay at (x, y).  The relay amplifies what it receives and forwards it in
the next time slot.  Squared channel gains on both hops are unit-mean
exponential (Rayleigh magnitude fading); path loss is D^-alpha.

The relay amplifier is calibrated against the *average* channel: its gain
uses the mean-square hop-1 gain (1.0) rather than the per-sample draw, so
G is deterministic given geometry and power.  Under that semi-blind model
the closed-form outage below is exact, which is what lets the Monte Carlo
estimator validate it to within sampling noise.

Three outage evaluators are provided:

* ``outage_exact``   -- Bessel-form closed expression (canonical objective),
* ``outage_approx``  -- small-argument log expansion of the same expression,
* ``outage_monte_carlo`` -- empirical estimate from fading draws.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .bessel import k1, k1_vec, xk1m1, xk1m1_vec

# Floor applied to hop distances before exponentiation; far below the
# per-slot mobility budget, only guards D^-alpha at degenerate geometry.
DISTANCE_FLOOR_M = 1e-6

# Fraction of the power budget kept away from either end of the split.
POWER_FLOOR_FRACTION = 1e-6

# Validity bound for the log expansion (flagged, never clamped).
APPROX_PSI_LIMIT = 0.1

MIN_MC_SAMPLES = 1000


@dataclass(frozen=True)
class RadioParams:
    """Global physical constants of the link, all in linear units."""

    noise_power_w: float
    snr_threshold: float
    path_loss_exp: float
    p_max_w: float
    separation_m: float

    def __post_init__(self):
        if not (self.noise_power_w > 0.0):
            raise ValueError("noise_power_w must be > 0")
        # snr_threshold == 0 is accepted as the degenerate no-outage limit.
        if not (self.snr_threshold >= 0.0):
            raise ValueError("snr_threshold must be >= 0")
        if not (self.path_loss_exp >= 2.0):
            raise ValueError("path_loss_exp must be >= 2")
        if not (self.p_max_w > 0.0):
            raise ValueError("p_max_w must be > 0")
        if not (self.separation_m > 0.0):
            raise ValueError("separation_m must be > 0")

    def with_separation(self, separation_m: float) -> "RadioParams":
        return replace(self, separation_m=separation_m)


@dataclass(frozen=True)
class Position:
    """Relay coordinates in meters."""

    x_m: float
    y_m: float

    def __post_init__(self):
        if not (math.isfinite(self.x_m) and math.isfinite(self.y_m)):
            raise ValueError("position coordinates must be finite")


@dataclass(frozen=True)
class RelayState:
    """Relay position plus the two-hop power allocation for one slot pair."""

    pos: Position
    p_source_w: float
    p_relay_w: float

    def __post_init__(self):
        if self.p_source_w < 0.0 or self.p_relay_w < 0.0:
            raise ValueError("transmit powers must be >= 0")

    def validate_budget(self, params: RadioParams) -> None:
        total = self.p_source_w + self.p_relay_w
        if total > params.p_max_w * (1.0 + 1e-12):
            raise ValueError(
                f"p_source_w + p_relay_w = {total} exceeds the power budget "
                f"{params.p_max_w}"
            )


@dataclass(frozen=True)
class ChannelSample:
    """One fading/noise realization (fields may be numpy arrays)."""

    gain_sq_hop1: float | np.ndarray
    gain_sq_hop2: float | np.ndarray
    noise_relay_w: float | np.ndarray
    noise_dest_w: float | np.ndarray

    def __post_init__(self):
        if np.any(np.asarray(self.gain_sq_hop1) < 0.0) or np.any(
            np.asarray(self.gain_sq_hop2) < 0.0
        ):
            raise ValueError("squared channel gains must be >= 0")


class OutageMethod(Enum):
    EXACT = "exact"
    APPROX = "approx"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class OutageResult:
    """Outage probability plus evaluation metadata.

    ``valid`` is False when the approximate evaluator was used outside its
    small-argument region (psi > 0.1) or produced a value outside [0, 1];
    the value is reported as computed, never clamped.
    """

    p_out: float
    psi: float
    method: OutageMethod
    mc_stderr: float | None = None
    valid: bool = True


def dist_source_relay(pos: Position) -> float:
    """Distance from the source node to the relay."""
    return math.hypot(pos.x_m, pos.y_m)


def dist_relay_dest(pos: Position, separation_m: float) -> float:
    """Distance from the relay to the destination node."""
    if separation_m <= 0.0:
        raise ValueError("separation_m must be > 0")
    return math.hypot(pos.x_m - separation_m, pos.y_m)


def amplifier_gain_sq(p_relay_w, p_source_w, d_source_relay, gain_sq_hop1, params):
    """Squared amplification factor G^2 = P_R / (P_I D_I^-a b1^2 + N0)."""
    den = (
        p_source_w * d_source_relay ** -params.path_loss_exp * gain_sq_hop1
        + params.noise_power_w
    )
    if np.any(np.asarray(den) <= 0.0):
        raise ValueError("amplifier gain denominator must be > 0")
    return p_relay_w / den


def instantaneous_snr(state: RelayState, sample: ChannelSample, params: RadioParams):
    """End-to-end SNR for one fading realization.

    The amplifier gain is the calibrated (mean-square-gain) G^2 from
    ``amplifier_gain_sq``; the sampled gains scale the received signal and
    the forwarded-noise term.  Accepts array-valued samples and then
    returns an array.
    """
    d_sr = max(dist_source_relay(state.pos), DISTANCE_FLOOR_M)
    d_rd = max(dist_relay_dest(state.pos, params.separation_m), DISTANCE_FLOOR_M)
    alpha = params.path_loss_exp
    g2 = amplifier_gain_sq(state.p_relay_w, state.p_source_w, d_sr, 1.0, params)
    hop1 = state.p_source_w * d_sr ** -alpha * sample.gain_sq_hop1
    hop2_loss = d_rd ** -alpha * sample.gain_sq_hop2
    num = g2 * hop1 * hop2_loss
    den = g2 * sample.noise_relay_w * hop2_loss + sample.noise_dest_w
    return num / den


def _link_terms(state: RelayState, separation_m: float, params: RadioParams):
    """Mean received powers (upsilon, sigma) for the two hops."""
    d_sr = max(dist_source_relay(state.pos), DISTANCE_FLOOR_M)
    d_rd = max(dist_relay_dest(state.pos, separation_m), DISTANCE_FLOOR_M)
    alpha = params.path_loss_exp
    upsilon = state.p_source_w * d_sr ** -alpha
    sigma = state.p_relay_w * d_rd ** -alpha
    return upsilon, sigma


def outage_exact_value(
    x_m: float,
    y_m: float,
    p_source_w: float,
    p_relay_w: float,
    separation_m: float,
    params: RadioParams,
) -> float:
    """Fast scalar closed-form outage; the optimizer's objective.

    p = 1 - exp(-N0 g / ups) * 2 psi K1(2 psi),
    psi = sqrt(N0 g (ups + N0) / (sigma ups)).

    Evaluated through expm1 and x*K1(x)-1 so small probabilities keep full
    relative precision.
    """
    n0 = params.noise_power_w
    gam = params.snr_threshold
    if gam == 0.0:
        return 0.0
    if p_source_w <= 0.0 or p_relay_w <= 0.0:
        return 1.0
    alpha = params.path_loss_exp
    d_sr = max(math.hypot(x_m, y_m), DISTANCE_FLOOR_M)
    d_rd = max(math.hypot(x_m - separation_m, y_m), DISTANCE_FLOOR_M)
    upsilon = p_source_w * d_sr ** -alpha
    sigma = p_relay_w * d_rd ** -alpha
    q = n0 * gam / upsilon
    x = 2.0 * math.sqrt(n0 * gam * (upsilon + n0) / (sigma * upsilon))
    if x <= 2.0:
        return -math.expm1(-q) - math.exp(-q) * xk1m1(x)
    return 1.0 - math.exp(-q) * x * k1(x)


def outage_exact(state: RelayState, separation_m: float, params: RadioParams) -> OutageResult:
    """Closed-form outage probability (canonical objective)."""
    n0 = params.noise_power_w
    gam = params.snr_threshold
    if gam == 0.0:
        return OutageResult(0.0, 0.0, OutageMethod.EXACT)
    if state.p_source_w <= 0.0 or state.p_relay_w <= 0.0:
        return OutageResult(1.0, math.inf, OutageMethod.EXACT)
    upsilon, sigma = _link_terms(state, separation_m, params)
    psi = math.sqrt(n0 * gam * (upsilon + n0) / (sigma * upsilon))
    p = outage_exact_value(
        state.pos.x_m, state.pos.y_m, state.p_source_w, state.p_relay_w,
        separation_m, params,
    )
    return OutageResult(p, psi, OutageMethod.EXACT)


def outage_approx(state: RelayState, separation_m: float, params: RadioParams) -> OutageResult:
    """Log-expansion outage p = 1 - (1 + 2 psi^2 ln psi) exp(-N0 g / ups).

    Here psi = sqrt(N0 g / sigma) (the expansion drops the (ups+N0)/ups
    factor of the exact form).  Outside its small-psi validity region the
    value can leave [0, 1]; such results are flagged via ``valid=False``.
    """
    n0 = params.noise_power_w
    gam = params.snr_threshold
    if gam == 0.0:
        return OutageResult(0.0, 0.0, OutageMethod.APPROX)
    if state.p_source_w <= 0.0 or state.p_relay_w <= 0.0:
        return OutageResult(1.0, math.inf, OutageMethod.APPROX, valid=False)
    upsilon, sigma = _link_terms(state, separation_m, params)
    q = n0 * gam / upsilon
    psi = math.sqrt(n0 * gam / sigma)
    tail = 0.0 if psi == 0.0 else 2.0 * psi * psi * math.log(psi)
    p = -math.expm1(-q) - math.exp(-q) * tail
    valid = psi <= APPROX_PSI_LIMIT and 0.0 <= p <= 1.0
    return OutageResult(p, psi, OutageMethod.APPROX, valid=valid)


def outage_monte_carlo(
    state: RelayState,
    separation_m: float,
    params: RadioParams,
    n_samples: int,
    seed: int,
) -> OutageResult:
    """Empirical outage estimate P[snr <= threshold] over fading draws.

    Squared hop gains are independent unit-mean exponentials; noise powers
    equal the configured noise level.  Deterministic for a fixed seed.
    """
    if n_samples < MIN_MC_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_MC_SAMPLES}")
    p = params if params.separation_m == separation_m else params.with_separation(separation_m)
    rng = np.random.default_rng(seed)
    sample = ChannelSample(
        gain_sq_hop1=rng.exponential(1.0, n_samples),
        gain_sq_hop2=rng.exponential(1.0, n_samples),
        noise_relay_w=p.noise_power_w,
        noise_dest_w=p.noise_power_w,
    )
    if state.p_relay_w == 0.0:
        gam_t = np.zeros(n_samples)
        psi = math.inf
    else:
        gam_t = instantaneous_snr(state, sample, p)
        upsilon, sigma = _link_terms(state, separation_m, params)
        if state.p_source_w > 0.0:
            psi = math.sqrt(
                p.noise_power_w * p.snr_threshold * (upsilon + p.noise_power_w)
                / (sigma * upsilon)
            )
        else:
            psi = math.inf
    hits = int(np.count_nonzero(gam_t <= p.snr_threshold))
    frac = hits / n_samples
    stderr = math.sqrt(frac * (1.0 - frac) / n_samples)
    return OutageResult(frac, psi, OutageMethod.MONTE_CARLO, mc_stderr=stderr)


def outage_exact_grid(x_m, y_m, p_source_w, p_relay_w, separation_m, params):
    """Vectorized closed-form outage over numpy arrays (broadcasting)."""
    n0 = params.noise_power_w
    gam = params.snr_threshold
    alpha = params.path_loss_exp
    if gam == 0.0:
        shape = np.broadcast(x_m, y_m, p_source_w, p_relay_w).shape
        return np.zeros(shape)
    d_sr = np.maximum(np.hypot(x_m, y_m), DISTANCE_FLOOR_M)
    d_rd = np.maximum(np.hypot(x_m - separation_m, y_m), DISTANCE_FLOOR_M)
    upsilon = p_source_w * d_sr ** -alpha
    sigma = p_relay_w * d_rd ** -alpha
    q = n0 * gam / upsilon
    x = 2.0 * np.sqrt(n0 * gam * (upsilon + n0) / (sigma * upsilon))
    small = x <= 2.0
    xs = np.where(small, x, 1.0)
    xb = np.where(small, 3.0, x)
    p_small = -np.expm1(-q) - np.exp(-q) * xk1m1_vec(xs)
    p_big = 1.0 - np.exp(-q) * xb * k1_vec(xb)
    return np.where(small, p_small, p_big)
