"""HTTP layer exposing cost evaluation, frontier tracing, and model metadata.

Stateless JSON API: every request carries its own seed and fully resolved
parameters, so identical requests return identical results and responses
can be cached client-side. A bounded concurrency gate sheds load with 503
instead of queuing without limit.
"""

from __future__ import annotations

import json
import math
import threading
from typing import Iterator, Literal

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel, Field

from . import __version__
from .copula import ClaytonParams
from .market import BsParams, CevParams
from .optimizer import draw_scenarios, frontier as trace_frontier, lognormal_plan_cost
from .targetdist import TargetDistribution

SCENARIO_CAP = 200_000
MAX_CONCURRENT_JOBS = 4
SCATTER_POINTS = 500

MODEL_DESCRIPTOR = {
    "service_version": __version__,
    "scenario_cap": SCENARIO_CAP,
    "models": [
        {
            "name": "black-scholes",
            "parameters": {
                "mu": {"description": "stock drift per year", "default": 0.03},
                "sigma": {"description": "volatility per sqrt(year)", "min_exclusive": 0.0, "default": 0.3},
                "r": {"description": "risk-free rate per year", "default": 0.02},
                "s0": {"description": "initial stock price", "min_exclusive": 0.0, "default": 1.0},
                "horizon_T": {"description": "horizon in years", "min_exclusive": 0.0, "default": 10.0},
            },
        },
        {
            "name": "cev",
            "parameters": {
                "mu": {"description": "stock drift per year", "default": 0.03},
                "sigma": {"description": "volatility scale", "min_exclusive": 0.0, "default": 0.3},
                "r": {"description": "risk-free rate per year", "default": 0.02},
                "s0": {"description": "initial stock price", "min_exclusive": 0.0, "default": 1.0},
                "horizon_T": {"description": "horizon in years", "min_exclusive": 0.0, "default": 10.0},
                "beta": {
                    "description": "elasticity exponent",
                    "min_exclusive": -0.5,
                    "max_exclusive": 0.0,
                    "default": -0.25,
                },
                "n_steps": {"description": "path discretization steps", "min": 1, "default": 1000},
            },
        },
    ],
    "alpha": {
        "description": "Clayton dependence parameter",
        "min": -1.0,
        "exclude": [0.0],
        "default": 20.0,
    },
    "defaults": {"mu": 0.03, "sigma": 0.3, "r": 0.02, "n_periods": 10, "budget": 1000.0},
}


class MarketSpec(BaseModel):
    model: Literal["black-scholes", "cev"] = "black-scholes"
    mu: float = 0.03
    sigma: float = 0.3
    r: float = 0.02
    s0: float = 1.0
    horizon_T: float = 10.0
    beta: float = -0.25
    n_steps: int = 1000

    def build(self):
        if self.model == "cev":
            return CevParams(
                mu=self.mu, sigma=self.sigma, r=self.r, s0=self.s0,
                horizon_T=self.horizon_T, beta=self.beta, n_steps=self.n_steps,
            )
        return BsParams(
            mu=self.mu, sigma=self.sigma, r=self.r, s0=self.s0, horizon_T=self.horizon_T
        )


class CostRequest(MarketSpec):
    alpha: float = 20.0
    mean: float = Field(default=100.0, description="per-period expected consumption")
    std: float = Field(default=40.0, description="per-period consumption std")
    n_periods: int = Field(default=10, ge=2)
    n_scenarios: int = Field(default=100_000, ge=100)
    seed: int = Field(default=0, ge=0)


class CostResponse(BaseModel):
    cost: float
    std_error: float
    per_period_mean: float
    seed: int
    request: CostRequest
    scatter: list[tuple[float, float]]


class FrontierRequest(MarketSpec):
    alpha: float = 20.0
    budget: float = Field(default=1000.0, gt=0.0)
    stds: list[float] = Field(default=[10, 20, 30, 40, 50, 60, 70, 80])
    n_periods: int = Field(default=10, ge=2)
    n_scenarios: int = Field(default=100_000, ge=100)
    seed: int = Field(default=0, ge=0)


class DomainError(ValueError):
    """Request is well-formed JSON but violates a model-domain constraint."""


def _checked_alpha(alpha: float) -> ClaytonParams:
    try:
        return ClaytonParams(alpha)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def _evaluate_cost(req: CostRequest) -> CostResponse:
    params = _checked_alpha(req.alpha)
    try:
        model = req.build()
        target = TargetDistribution.from_mean_std(req.mean, req.std)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    sc = draw_scenarios(model, req.n_scenarios, req.n_periods, params, req.seed)
    value, se = lognormal_plan_cost(sc, target.log_m, target.log_v)

    xi_sorted = np.sort(sc.kernel.xi)
    z = np.exp(target.log_m + target.log_v * sc.z_scores).sum(axis=1)
    z_desc = -np.sort(-z)
    take = np.linspace(0, req.n_scenarios - 1, min(SCATTER_POINTS, req.n_scenarios)).astype(int)
    scatter = [(float(xi_sorted[i]), float(z_desc[i])) for i in take]
    return CostResponse(
        cost=value,
        std_error=se,
        per_period_mean=req.mean,
        seed=req.seed,
        request=req,
        scatter=scatter,
    )


def create_app(
    scenario_cap: int = SCENARIO_CAP, max_concurrent: int = MAX_CONCURRENT_JOBS
) -> FastAPI:
    app = FastAPI(title="costeff", version=__version__)
    gate = threading.BoundedSemaphore(max_concurrent)

    @app.exception_handler(RequestValidationError)
    async def schema_error(request: Request, exc: RequestValidationError):
        # schema violations are client errors with field paths
        details = [
            {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"errors": details})

    @app.exception_handler(DomainError)
    async def domain_error(request: Request, exc: DomainError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    def _admit(n_scenarios: int) -> None:
        if n_scenarios > scenario_cap:
            raise DomainError(
                f"n_scenarios={n_scenarios} exceeds the service cap of {scenario_cap}"
            )

    @app.get("/api/models")
    def models():
        return MODEL_DESCRIPTOR

    @app.post("/api/cost", response_model=CostResponse)
    def cost_endpoint(req: CostRequest):
        _admit(req.n_scenarios)
        if not gate.acquire(blocking=False):
            return JSONResponse(status_code=503, content={"error": "server at capacity"})
        try:
            return _evaluate_cost(req)
        finally:
            gate.release()

    @app.post("/api/frontier")
    async def frontier_endpoint(req: FrontierRequest, request: Request):
        _admit(req.n_scenarios)
        params = _checked_alpha(req.alpha)
        try:
            model = req.build()
        except ValueError as exc:
            raise DomainError(str(exc)) from exc
        if not gate.acquire(blocking=False):
            return JSONResponse(status_code=503, content={"error": "server at capacity"})

        def produce() -> Iterator[str]:
            # one newline-delimited JSON object per completed grid point, in
            # ascending-std order; a client disconnect closes the generator at
            # the next grid-point boundary
            try:
                sc = draw_scenarios(model, req.n_scenarios, req.n_periods, params, req.seed)
                for std in sorted(req.stds):
                    pts = trace_frontier(
                        req.budget, [std], params, model, req.n_scenarios, req.seed,
                        n_periods=req.n_periods, scenarios=sc,
                    )
                    pt = pts[0]
                    yield json.dumps(
                        {
                            "target_std": pt.target_std,
                            "per_period_mean": pt.per_period_mean,
                            "achieved_cost": pt.achieved_cost,
                            "budget": pt.budget,
                            "budget_at_horizon": pt.budget_at_horizon,
                            "alpha": req.alpha,
                            "seed": req.seed,
                        }
                    ) + "\n"
            finally:
                gate.release()

        return StreamingResponse(produce(), media_type="application/x-ndjson")

    return app
