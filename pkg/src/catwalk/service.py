"""HTTP facade over the counting library.

Error contract: malformed input maps to 422 with category "input";
violated internal guarantees (restoration, meter balance, space
formulas) map to 500 with category "invariant".  The CLI translates
those to exit codes 2 and 3.
"""

from __future__ import annotations

import time

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .crt import RunStats, count_walks_exact_catalytic, decide_stcon
from .engine import SpaceMeter, catalyst_bits, ceil_log2, frame_bits
from .errors import InputError, InvariantViolation, SpaceFormulaError
from .extract import RunConfig, count_walks_mod
from .graph import random_digraph
from .schemas import (
    BenchRequest,
    BenchResponse,
    CheckRecord,
    CountWalksRequest,
    CountWalksResponse,
    MetricsRecord,
    StconRequest,
    StconResponse,
    VerifyRequest,
    VerifyResponse,
    WitnessRecord,
)
from .verify import run_verify_suite


def run_bench_grid(sizes: list[int], ks: list[int], q: int, seed: int) -> list[RunStats]:
    """One metered run per (n, k, l) cell, l over {2, n/2, n}, with the
    structural formulas asserted on every cell."""
    out = []
    for n in sizes:
        if n < 2:
            raise InputError(f"bench sizes must be >= 2, got {n}")
        g = random_digraph(n, 0.3, seed=97 + n)
        for k in ks:
            if not (1 <= k <= n):
                raise InputError(f"bench k={k} out of range for n={n}")
            for length in sorted({2, n // 2, n}):
                meter = SpaceMeter()
                cfg = RunConfig(s=0, t=n - 1, length=length, k=k, q=q, seed=seed)
                started = time.perf_counter()
                count_walks_mod(g, cfg, meter=meter)
                wall = time.perf_counter() - started
                depth = ceil_log2(length)
                if meter.peak_stack_depth != depth:
                    raise SpaceFormulaError(
                        f"peak depth {meter.peak_stack_depth} != ceil(log2 {length})={depth}"
                    )
                if meter.peak_by_category["stack"] != frame_bits(k) * depth:
                    raise SpaceFormulaError(
                        f"stack bits {meter.peak_by_category['stack']} != "
                        f"{frame_bits(k)} per frame x {depth} frames"
                    )
                expect_catalyst = catalyst_bits(length, n, k, q)
                if meter.catalyst_bits != expect_catalyst:
                    raise SpaceFormulaError(
                        f"catalyst {meter.catalyst_bits} != formula {expect_catalyst}"
                    )
                out.append(
                    RunStats(
                        n=n,
                        k=k,
                        length=length,
                        moduli=[q],
                        catalyst_bits=meter.catalyst_bits,
                        peak_workspace_bits=meter.peak_workspace_bits,
                        peak_stack_depth=meter.peak_stack_depth,
                        runs=4,
                        seed=seed,
                        wall_time_s=wall,
                    )
                )
    return out


def create_app() -> FastAPI:
    app = FastAPI(title="catwalk")

    @app.exception_handler(InputError)
    async def _input_error(request: Request, exc: InputError) -> JSONResponse:
        return JSONResponse(
            status_code=422, content={"error": str(exc), "category": "input"}
        )

    @app.exception_handler(InvariantViolation)
    async def _invariant_error(
        request: Request, exc: InvariantViolation
    ) -> JSONResponse:
        return JSONResponse(
            status_code=500, content={"error": str(exc), "category": "invariant"}
        )

    @app.get("/healthz")
    async def health() -> dict:
        return {"status": "ok"}

    @app.post("/count-walks", response_model=CountWalksResponse)
    def count_walks(req: CountWalksRequest) -> CountWalksResponse:
        g = req.graph.to_graph()
        lines: list[str] = []
        value, witness, stats = count_walks_exact_catalytic(
            g,
            req.source,
            req.target,
            req.length,
            k=req.k,
            seed=req.seed,
            strict_paper=req.strict_paper,
            packed=req.packed,
            parallel=req.parallel_moduli,
            executor="reference" if req.trace else "auto",
            trace=lines.append if req.trace else None,
        )
        return CountWalksResponse(
            count=str(value),
            witness=WitnessRecord.from_witness(witness),
            metrics=MetricsRecord.from_stats(stats),
            trace=lines if req.trace else None,
        )

    @app.post("/stcon", response_model=StconResponse)
    def stcon(req: StconRequest) -> StconResponse:
        g = req.graph.to_graph()
        verdict, stats = decide_stcon(
            g,
            req.source,
            req.target,
            k=req.k,
            seed=req.seed,
            strict_paper=req.strict_paper,
            packed=req.packed,
            parallel=req.parallel_moduli,
        )
        return StconResponse(
            reachable=verdict,
            verdict="REACHABLE" if verdict else "UNREACHABLE",
            metrics=MetricsRecord.from_stats(stats),
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        g = req.graph.to_graph() if req.graph is not None else None
        results = run_verify_suite(
            graph=g,
            seeds=req.seeds,
            fault=req.fault,
            base_seed=req.base_seed,
            packed=req.packed,
        )
        return VerifyResponse(
            passed=all(r.passed for r in results),
            checks=[
                CheckRecord(name=r.name, passed=r.passed, cases=r.cases, detail=r.detail)
                for r in results
            ],
        )

    @app.post("/bench", response_model=BenchResponse)
    def bench(req: BenchRequest) -> BenchResponse:
        stats = run_bench_grid(req.sizes, req.ks, req.q, req.seed)
        return BenchResponse(records=[MetricsRecord.from_stats(s) for s in stats])

    return app
