"""HTTP service exposing the relay toolkit.

All endpoints are stateless: a request fully determines the response, so
any number of clients can share one server.  Config/validation problems
map to 400 with the violated rule in the detail; numerical failures map
to 500.
"""

import math

from fastapi import FastAPI, HTTPException

from .. import experiments
from ..config import ConfigError, ExperimentConfig, config_to_dict, from_mapping
from ..model import (
    OutageMethod,
    Position,
    RelayState,
    outage_approx,
    outage_exact,
    outage_monte_carlo,
)
from ..schemes import Scheme
from .schemas import (
    BruteForceRequest,
    BruteForceResponse,
    ConfigModel,
    HealthResponse,
    MonteCarloRequest,
    MonteCarloResponse,
    OptimizeRequest,
    OptimizeResponse,
    OutageRequest,
    OutageResponse,
    SelectRequest,
    SelectResponse,
    SweepRequest,
    SweepResponse,
    Table,
)


def _build_config(model: ConfigModel) -> ExperimentConfig:
    try:
        return from_mapping(model.set_fields())
    except ConfigError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _table(t) -> Table:
    return Table(name=t.name, header=list(t.header), rows=[list(r) for r in t.rows])


def _json_safe(x: float) -> float:
    # JSON has no inf; the only non-finite the model produces is +inf psi
    # at a zero-power edge.
    return 1e308 if math.isinf(x) else x


def create_app() -> FastAPI:
    app = FastAPI(
        title="fogrelay",
        description="Two-hop amplify-and-forward relay outage toolkit",
    )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return HealthResponse(status="ok")

    @app.get("/defaults")
    def defaults():
        return config_to_dict(ExperimentConfig())

    @app.post("/outage", response_model=OutageResponse)
    def outage(req: OutageRequest):
        cfg = _build_config(req.config)
        params = cfg.radio()
        try:
            state = RelayState(Position(req.x_m, req.y_m), req.p_source_w, req.p_relay_w)
            state.validate_budget(params)
            if req.method == "exact":
                res = outage_exact(state, params.separation_m, params)
            elif req.method == "approx":
                res = outage_approx(state, params.separation_m, params)
            else:
                res = outage_monte_carlo(
                    state, params.separation_m, params, req.n_samples, req.seed
                )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return OutageResponse(
            p_out=res.p_out,
            psi=_json_safe(res.psi),
            method=res.method.value,
            mc_stderr=res.mc_stderr,
            valid=res.valid,
        )

    @app.post("/optimize", response_model=OptimizeResponse)
    def optimize(req: OptimizeRequest):
        cfg = _build_config(req.config)
        out = _run(experiments.run_optimize, cfg, Scheme.parse(req.scheme))
        return OptimizeResponse(
            trajectory=_table(out["trajectory"]),
            summary=_table(out["summary"]),
            final_outage=out["final_outage"],
            theta=out["theta"],
            improvement_vs_flfp_pct=out["improvement_vs_flfp_pct"],
            flfp_final_outage=out["flfp_final_outage"],
        )

    @app.post("/sweep", response_model=SweepResponse)
    def sweep(req: SweepRequest):
        cfg = _build_config(req.config)
        if req.variable == "power":
            out = _run(experiments.run_sweep_power, cfg)
        else:
            out = _run(experiments.run_sweep_separation, cfg)
        return SweepResponse(table=_table(out["table"]))

    @app.post("/brute-force", response_model=BruteForceResponse)
    def brute_force(req: BruteForceRequest):
        cfg = _build_config(req.config)
        out = _run(experiments.run_brute_force, cfg)
        return BruteForceResponse(table=_table(out["table"]), p_out=out["p_out"])

    @app.post("/select", response_model=SelectResponse)
    def select(req: SelectRequest):
        cfg = _build_config(req.config)
        out = _run(experiments.run_select, cfg)
        return SelectResponse(
            deployment=_table(out["deployment"]),
            convergence=_table(out["convergence"]),
            phases=_table(out["phases"]),
            fairness=_table(out["fairness"]),
            jain_index=out["jain_index"],
        )

    @app.post("/montecarlo", response_model=MonteCarloResponse)
    def montecarlo(req: MonteCarloRequest):
        cfg = _build_config(req.config)
        out = _run(experiments.run_montecarlo, cfg)
        return MonteCarloResponse(table=_table(out["table"]))

    return app


def _run(fn, *args):
    try:
        return fn(*args)
    except ConfigError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    except (ArithmeticError, RuntimeError) as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc


app = create_app()
