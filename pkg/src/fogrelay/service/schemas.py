"""Pydantic request/response models for the HTTP service.

The config payload mirrors the flat config-file keys; omitted fields take
the same defaults as an empty config file.  Responses return tables as
(header, rows) so thin clients can persist them without re-deriving
anything.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict


class ConfigModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    noise_dbm: Optional[float] = None
    snr_threshold_db: Optional[float] = None
    alpha: Optional[float] = None
    p_max_dbm: Optional[float] = None
    separation_m: Optional[float] = None
    k_slots: Optional[int] = None
    tol: Optional[float] = None
    step_size: Optional[float] = None
    grad_step: Optional[float] = None
    mobility_limit_m: Optional[float] = None
    line_search: Optional[str] = None
    p_init_dbm: Optional[float] = None
    start_x_m: Optional[float] = None
    start_y_m: Optional[float] = None
    schemes: Optional[list[str]] = None
    n_relays: Optional[int] = None
    n_phases: Optional[int] = None
    tick_budget: Optional[int] = None
    cts_delay: Optional[int] = None
    select_scheme: Optional[str] = None
    inject_thetas: Optional[list[int]] = None
    n_power: Optional[int] = None
    n_positions: Optional[int] = None
    sweep_points: Optional[int] = None
    sweep_rho_floor: Optional[float] = None
    l_values: Optional[list[float]] = None
    mc_samples: Optional[int] = None
    seed: Optional[int] = None
    output_dir: Optional[str] = None

    def set_fields(self) -> dict:
        return {k: v for k, v in self.model_dump().items() if v is not None}


class Table(BaseModel):
    name: str
    header: list[str]
    rows: list[list]


class OptimizeRequest(BaseModel):
    config: ConfigModel = ConfigModel()
    scheme: Literal["flfp", "olfp", "opfl", "olop"]


class OptimizeResponse(BaseModel):
    trajectory: Table
    summary: Table
    final_outage: float
    theta: int
    improvement_vs_flfp_pct: float
    flfp_final_outage: float


class SweepRequest(BaseModel):
    config: ConfigModel = ConfigModel()
    variable: Literal["power", "separation"]


class SweepResponse(BaseModel):
    table: Table


class BruteForceRequest(BaseModel):
    config: ConfigModel = ConfigModel()


class BruteForceResponse(BaseModel):
    table: Table
    p_out: float


class SelectRequest(BaseModel):
    config: ConfigModel = ConfigModel()


class SelectResponse(BaseModel):
    deployment: Table
    convergence: Table
    phases: Table
    fairness: Table
    jain_index: float


class MonteCarloRequest(BaseModel):
    config: ConfigModel = ConfigModel()


class MonteCarloResponse(BaseModel):
    table: Table


class OutageRequest(BaseModel):
    """Direct single-scenario outage evaluation."""

    model_config = ConfigDict(extra="forbid")

    config: ConfigModel = ConfigModel()
    x_m: float
    y_m: float
    p_source_w: float
    p_relay_w: float
    method: Literal["exact", "approx", "monte_carlo"] = "exact"
    n_samples: int = 1000000
    seed: int = 0


class OutageResponse(BaseModel):
    p_out: float
    psi: float
    method: str
    mc_stderr: Optional[float] = None
    valid: bool


class HealthResponse(BaseModel):
    status: str
