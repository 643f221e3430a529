"""Experiment configuration: flat key=value files, defaults, validation.

The file format is UTF-8 ``key = value`` lines with ``#`` comments.
Unknown keys are rejected; missing keys fall back to the default
scenario (50 m link, 26 dBm budget, 0 dB threshold, path-loss exponent
4, -96 dBm noise, 1500 slots, 0.01 m mobility budget).  dBm/dB values
live only here; everything downstream runs in watts and linear ratios.

``p_init_dbm`` sets the per-node starting transmit level and defaults to
half the budget on the dBm scale (13 dBm under the default budget), which
leaves power headroom for the power-controlling schemes to claim.
"""

import math
from dataclasses import dataclass, fields

from .descent import LineSearch, SdmConfig
from .gridsearch import GridSpec
from .model import Position, RadioParams, RelayState
from .schemes import Scheme
from .units import dbm_to_watts, db_to_linear


class ConfigError(ValueError):
    """Config parse or validation failure (CLI exit code 1)."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


_SCHEME_NAMES = ("flfp", "olfp", "opfl", "olop")


@dataclass(frozen=True)
class ExperimentConfig:
    # radio (dBm / dB boundary)
    noise_dbm: float = -96.0
    snr_threshold_db: float = 0.0
    alpha: float = 4.0
    p_max_dbm: float = 26.0
    separation_m: float = 50.0
    # descent / slots
    k_slots: int = 1500
    tol: float = 1e-9
    step_size: float = 1e-3
    grad_step: float = 1e-6
    mobility_limit_m: float = 0.01
    line_search: str = "exact"
    # scenario start
    p_init_dbm: float | None = None
    start_x_m: float | None = None
    start_y_m: float = 0.0
    schemes: tuple = _SCHEME_NAMES
    # selection
    n_relays: int = 4
    n_phases: int = 200
    tick_budget: int = 5
    cts_delay: int = 5
    select_scheme: str = "olfp"
    inject_thetas: tuple | None = None
    # brute force / sweeps
    n_power: int = 800
    n_positions: int = 3000
    sweep_points: int = 800
    sweep_rho_floor: float = 1e-9
    l_values: tuple = (30.0, 35.0, 40.0, 45.0, 48.0, 50.0)
    # monte carlo
    mc_samples: int = 1000000
    # run control
    seed: int = 0
    output_dir: str = "."

    # ---- derived views (linear units) ----

    def radio(self) -> RadioParams:
        return RadioParams(
            noise_power_w=dbm_to_watts(self.noise_dbm),
            snr_threshold=(
                0.0 if self.snr_threshold_db == -math.inf
                else db_to_linear(self.snr_threshold_db)
            ),
            path_loss_exp=self.alpha,
            p_max_w=dbm_to_watts(self.p_max_dbm),
            separation_m=self.separation_m,
        )

    def sdm(self) -> SdmConfig:
        return SdmConfig(
            step_size=self.step_size,
            grad_step=self.grad_step,
            tol=self.tol,
            max_iters=self.k_slots,
            mobility_limit_m=self.mobility_limit_m,
            line_search=LineSearch(self.line_search),
        )

    def grid(self) -> GridSpec:
        return GridSpec(n_power=self.n_power, n_positions=self.n_positions)

    def initial_power_w(self) -> float:
        dbm = self.p_init_dbm if self.p_init_dbm is not None else self.p_max_dbm / 2.0
        return dbm_to_watts(dbm)

    def start_state(self) -> RelayState:
        x = self.start_x_m if self.start_x_m is not None else self.separation_m / 2.0
        p = self.initial_power_w()
        return RelayState(Position(x, self.start_y_m), p, p)

    def scheme_list(self) -> list:
        return [Scheme.parse(s) for s in self.schemes]


_INT_KEYS = {
    "k_slots", "n_relays", "n_phases", "tick_budget", "cts_delay",
    "n_power", "n_positions", "sweep_points", "mc_samples", "seed",
}
_FLOAT_KEYS = {
    "noise_dbm", "snr_threshold_db", "alpha", "p_max_dbm", "separation_m",
    "tol", "step_size", "grad_step", "mobility_limit_m", "p_init_dbm",
    "start_x_m", "start_y_m", "sweep_rho_floor",
}
_STR_KEYS = {"line_search", "select_scheme", "output_dir"}
_LIST_FLOAT_KEYS = {"l_values"}
_LIST_INT_KEYS = {"inject_thetas"}
_LIST_STR_KEYS = {"schemes"}

_ALL_KEYS = (
    _INT_KEYS | _FLOAT_KEYS | _STR_KEYS
    | _LIST_FLOAT_KEYS | _LIST_INT_KEYS | _LIST_STR_KEYS
)


def _coerce(key: str, raw: str, line: int):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _LIST_FLOAT_KEYS:
            return tuple(float(v) for v in raw.split(",") if v.strip())
        if key in _LIST_INT_KEYS:
            return tuple(int(v) for v in raw.split(",") if v.strip())
        if key in _LIST_STR_KEYS:
            return tuple(v.strip().lower() for v in raw.split(",") if v.strip())
        return raw
    except ValueError:
        raise ConfigError(f"cannot parse value for '{key}': {raw!r}", line) from None


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    """Cross-field validation; raises ConfigError naming the broken rule."""
    try:
        cfg.radio()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        cfg.sdm()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    try:
        cfg.grid()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.line_search not in ("exact", "fixed"):
        raise ConfigError("line_search must be 'exact' or 'fixed'")
    for s in cfg.schemes:
        if s not in _SCHEME_NAMES:
            raise ConfigError(f"unknown scheme '{s}'")
    if cfg.select_scheme not in _SCHEME_NAMES:
        raise ConfigError(f"unknown scheme '{cfg.select_scheme}'")
    if cfg.n_relays < 1:
        raise ConfigError("n_relays must be >= 1")
    if cfg.n_phases < 1:
        raise ConfigError("n_phases must be >= 1")
    if cfg.tick_budget < 0:
        raise ConfigError("tick_budget must be >= 0")
    if cfg.cts_delay < 0:
        raise ConfigError("cts_delay must be >= 0")
    if cfg.mc_samples < 1000:
        raise ConfigError("mc_samples must be >= 1000")
    if cfg.sweep_points < 2:
        raise ConfigError("sweep_points must be >= 2")
    if not (0.0 < cfg.sweep_rho_floor < 0.5):
        raise ConfigError("sweep_rho_floor must be in (0, 0.5)")
    if not cfg.l_values:
        raise ConfigError("l_values must be non-empty")
    if any(b <= a for a, b in zip(cfg.l_values, cfg.l_values[1:])):
        raise ConfigError("l_values must be strictly ascending")
    if any(l <= 0 for l in cfg.l_values):
        raise ConfigError("l_values must be positive")
    if cfg.inject_thetas is not None:
        if len(cfg.inject_thetas) != cfg.n_relays:
            raise ConfigError("inject_thetas length must equal n_relays")
        if any(t < 0 for t in cfg.inject_thetas):
            raise ConfigError("inject_thetas entries must be >= 0")
    if cfg.seed < 0:
        raise ConfigError("seed must be >= 0")
    # start state must satisfy the power budget
    try:
        cfg.start_state().validate_budget(cfg.radio())
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def from_mapping(values: dict) -> ExperimentConfig:
    """Build a validated config from a flat mapping of known keys."""
    unknown = set(values) - _ALL_KEYS
    if unknown:
        raise ConfigError(f"unknown key '{sorted(unknown)[0]}'")
    norm = {
        k: tuple(v) if isinstance(v, list) else v
        for k, v in values.items()
    }
    return validate(ExperimentConfig(**norm))


def load_config(path: str) -> ExperimentConfig:
    """Parse and validate a key=value config file."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    for lineno, rawline in enumerate(lines, start=1):
        text = rawline.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError("expected 'key = value'", lineno)
        key, _, raw = text.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key '{key}'", lineno)
        if key in values:
            raise ConfigError(f"duplicate key '{key}'", lineno)
        values[key] = _coerce(key, raw, lineno)
    return validate(ExperimentConfig(**values))


def serialize_config(cfg: ExperimentConfig) -> str:
    """Canonical key=value text that reparses to an equal config."""
    out = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, tuple):
            rendered = ",".join(_render(item) for item in v)
        else:
            rendered = _render(v)
        out.append(f"{f.name} = {rendered}")
    return "\n".join(out) + "\n"


def _render(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Plain-JSON-able mapping of the explicitly set fields."""
    out = {}
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        out[f.name] = list(v) if isinstance(v, tuple) else v
    return out
