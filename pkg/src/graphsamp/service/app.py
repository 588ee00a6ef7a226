"""FastAPI application exposing the toolkit as stateless JSON endpoints.

Every endpoint rebuilds what it needs from the request payload (graphs travel
as edge lists), so the service carries no state between calls and replies are
fully determined by the request. Toolkit errors surface as HTTP 422 with the
exception class name in the detail.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..completion import CompletionProblem, active_sample_greedy, apply_system, bl_cross_sample, dglr_objective, dglr_solve
from ..errors import GraphSampError, InvalidSpec
from ..experiments import DEFAULT_SEED, ExperimentConfig, run_experiment
from ..filters import resolve_kernel
from ..generators import Community, Complete, Cycle, Path, RandomSensor, gen_graph
from ..graphs import Graph, SpectralDecomposition, VariationOperatorKind, decompose_graph
from ..recovery import (
    Bandlimited,
    PeriodicSpectrum,
    PiecewiseConstant,
    build_generator,
    recover,
)
from ..sampling import (
    FrequencySampler,
    SamplingMatrixView,
    VertexSampler,
    frequency_sampler_view,
    vertex_sampler_view,
)
from ..selection import (
    Criterion,
    SelectionResult,
    coherence_distribution,
    greedy_select,
    greedy_select_localized,
    greedy_select_regularized,
    random_select,
)
from ..selftest import run_selftest
from . import schemas

_OPERATOR = {
    "combinatorial": VariationOperatorKind.COMBINATORIAL,
    "normalized": VariationOperatorKind.SYMMETRIC_NORMALIZED,
}


def _build_sampler_view(
    graph: Graph,
    dec: SpectralDecomposition,
    spec: schemas.SamplerSpec,
) -> SamplingMatrixView:
    if spec.mode == "vertex":
        if not spec.nodes:
            raise InvalidSpec("vertex sampling needs a node set")
        prefilter = None
        if spec.prefilter:
            prefilter = resolve_kernel(spec.prefilter, eigenvalues=dec.eigenvalues)
        return vertex_sampler_view(graph, dec, VertexSampler(tuple(spec.nodes), prefilter=prefilter))
    if spec.ratio is None:
        raise InvalidSpec("frequency sampling needs a folding ratio")
    kernel = resolve_kernel(spec.kernel or "identity", eigenvalues=dec.eigenvalues)
    return frequency_sampler_view(dec, FrequencySampler(kernel, spec.ratio))


def _parse_model(request: schemas.RecoverRequest, dec: SpectralDecomposition):
    head, _, rest = request.model.partition(":")
    if head == "bandlimited":
        return Bandlimited(int(rest))
    if head in ("pgs", "periodic"):
        period_text, _, kernel_name = rest.partition(":")
        if not kernel_name:
            raise InvalidSpec("periodic model is '<pgs|periodic>:K:kernel'")
        kernel = resolve_kernel(kernel_name, eigenvalues=dec.eigenvalues)
        return PeriodicSpectrum(kernel, int(period_text))
    if head == "pwc":
        if not request.partition_cells:
            raise InvalidSpec("piecewise-constant model needs partition_cells")
        return PiecewiseConstant(tuple(tuple(cell) for cell in request.partition_cells))
    raise InvalidSpec(f"unknown model '{request.model}'")


def _run_selection(request: schemas.SelectRequest) -> SelectionResult:
    graph = request.graph.to_graph()
    kind = _OPERATOR[request.operator]
    head, _, arg = request.criterion.partition(":")
    if head in ("eopt", "aopt"):
        dec = decompose_graph(graph, kind)
        bandwidth = request.bandwidth or request.budget
        criterion = Criterion.E_OPT if head == "eopt" else Criterion.A_OPT
        return greedy_select(dec, bandwidth, request.budget, criterion)
    if head == "eopt-reg":
        from ..graphs import build_laplacian

        gamma = float(arg) if arg else 1.0
        return greedy_select_regularized(build_laplacian(graph, kind), gamma, request.budget)
    if head == "localized":
        dec = decompose_graph(graph, kind)
        kernel = resolve_kernel(arg or "identity", eigenvalues=dec.eigenvalues)
        return greedy_select_localized(dec, kernel, request.budget)
    if head == "coherence":
        dec = decompose_graph(graph, kind)
        bandwidth = int(arg) if arg else (request.bandwidth or request.budget)
        return random_select(coherence_distribution(dec, bandwidth), request.budget, request.seed)
    if head == "uniform":
        p = np.full(graph.node_count, 1.0 / graph.node_count)
        return random_select(p, request.budget, request.seed)
    raise InvalidSpec(f"unknown criterion '{request.criterion}'")


def create_app() -> FastAPI:
    app = FastAPI(title="graphsamp", version="0.1.0")

    @app.exception_handler(GraphSampError)
    async def toolkit_error(request: Request, exc: GraphSampError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"error": type(exc).__name__, "message": str(exc)}},
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/graph/generate", response_model=schemas.GenerateGraphResponse)
    def generate_graph(request: schemas.GenerateGraphRequest):
        if request.kind == "random-sensor":
            if request.node_count is None:
                raise InvalidSpec("random-sensor needs node_count")
            spec = RandomSensor(request.node_count, request.k_neighbors, request.seed)
        elif request.kind == "community":
            if not request.cluster_sizes:
                raise InvalidSpec("community needs cluster_sizes")
            spec = Community(tuple(request.cluster_sizes), request.p_in, request.p_out, request.seed)
        else:
            if request.node_count is None:
                raise InvalidSpec(f"{request.kind} needs node_count")
            spec = {"path": Path, "cycle": Cycle, "complete": Complete}[request.kind](request.node_count)
        graph = gen_graph(spec)
        return schemas.GenerateGraphResponse(graph=schemas.GraphPayload.from_graph(graph))

    @app.post("/sample", response_model=schemas.SampleResponse)
    def sample(request: schemas.SampleRequest):
        graph = request.graph.to_graph()
        dec = decompose_graph(graph, _OPERATOR[request.operator])
        view = _build_sampler_view(graph, dec, request.sampler)
        samples = view.apply(np.asarray(request.signal, dtype=float))
        return schemas.SampleResponse(samples=[float(v) for v in samples])

    @app.post("/select", response_model=schemas.SelectResponse)
    def select(request: schemas.SelectRequest):
        result = _run_selection(request)
        return schemas.SelectResponse(
            ordered_nodes=list(result.ordered_nodes),
            per_step_score=list(result.per_step_score),
            criterion=result.criterion,
        )

    @app.post("/recover", response_model=schemas.RecoverResponse)
    def recover_endpoint(request: schemas.RecoverRequest):
        graph = request.graph.to_graph()
        dec = decompose_graph(graph, _OPERATOR[request.operator])
        model = _parse_model(request, dec)
        generator = build_generator(dec, model)
        view = _build_sampler_view(graph, dec, request.sampler)
        report = recover(generator, view, np.asarray(request.samples, dtype=float))
        return schemas.RecoverResponse(
            reconstruction=[float(v) for v in report.reconstruction],
            residual_norm=report.residual_norm,
            ds_condition_held=report.ds_condition_held,
            smallest_singular_value=report.conditioning,
        )

    @app.post("/mc/solve", response_model=schemas.McSolveResponse)
    def mc_solve(request: schemas.McSolveRequest):
        observed = np.zeros((request.observed.rows, request.observed.cols))
        for i, j, value in request.observed.entries:
            observed[i, j] = value
        prob = CompletionProblem(
            observed=observed,
            mask=tuple((int(i), int(j)) for i, j in request.mask),
            row_graph=request.row_graph.to_graph(),
            col_graph=request.col_graph.to_graph(),
            alpha=request.alpha,
            beta=request.beta,
        )
        solution = dglr_solve(prob, tol=request.tol)
        vec = solution.reshape(-1, order="F")
        rhs = (prob.mask_matrix() * prob.observed).reshape(-1, order="F")
        residual = float(np.linalg.norm(apply_system(prob, vec) - rhs) / max(np.linalg.norm(rhs), 1e-300))
        return schemas.McSolveResponse(
            solution=[[float(v) for v in row] for row in solution],
            residual=residual,
            objective=dglr_objective(solution, prob),
        )

    @app.post("/mc/sample", response_model=schemas.McSampleResponse)
    def mc_sample(request: schemas.McSampleRequest):
        row_graph = request.row_graph.to_graph()
        col_graph = request.col_graph.to_graph()
        if request.strategy == "greedy":
            if request.budget is None:
                raise InvalidSpec("greedy entry sampling needs a budget")
            mask = active_sample_greedy(row_graph, col_graph, request.alpha, request.beta, request.budget)
        else:
            if request.row_bandwidth is None or request.col_bandwidth is None:
                raise InvalidSpec("blcross sampling needs row_bandwidth and col_bandwidth")
            mask = bl_cross_sample(row_graph, col_graph, request.row_bandwidth, request.col_bandwidth)
        return schemas.McSampleResponse(mask=list(mask))

    @app.post("/experiment", response_model=schemas.ExperimentResponse)
    def experiment(request: schemas.ExperimentRequest):
        cfg = ExperimentConfig(
            experiment=request.experiment,
            seed=DEFAULT_SEED if request.seed is None else request.seed,
            overrides=request.overrides,
        )
        result = run_experiment(cfg)
        return schemas.ExperimentResponse(
            experiment=result.experiment,
            seed=result.seed,
            passed=bool(result.report["passed"]),
            report=result.report,
            series=result.series,
        )

    @app.post("/selftest", response_model=schemas.SelftestResponse)
    def selftest():
        results = run_selftest()
        return schemas.SelftestResponse(
            all_passed=all(r.passed for r in results),
            results=[schemas.CheckPayload(name=r.name, passed=r.passed, detail=r.detail) for r in results],
        )

    return app


app = create_app()
