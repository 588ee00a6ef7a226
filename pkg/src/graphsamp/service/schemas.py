"""Pydantic request/response models for the HTTP service."""
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..graphs import Graph

OperatorName = Literal["combinatorial", "normalized"]


class GraphPayload(BaseModel):
    node_count: int
    edges: list[tuple[int, int, float]]

    @classmethod
    def from_graph(cls, graph: Graph) -> "GraphPayload":
        return cls(node_count=graph.node_count, edges=list(graph.edges))

    def to_graph(self) -> Graph:
        return Graph(self.node_count, tuple(self.edges))


class GenerateGraphRequest(BaseModel):
    kind: Literal["random-sensor", "community", "path", "cycle", "complete"]
    node_count: int | None = None
    k_neighbors: int = 6
    cluster_sizes: list[int] | None = None
    p_in: float = 0.8
    p_out: float = 0.01
    seed: int = 0


class GenerateGraphResponse(BaseModel):
    graph: GraphPayload


class SamplerSpec(BaseModel):
    """How to sample: a node set (vertex) or a kernel + folding ratio (frequency)."""

    mode: Literal["vertex", "frequency"]
    nodes: list[int] | None = None
    prefilter: str | None = None
    kernel: str | None = None
    ratio: int | None = None


class SampleRequest(BaseModel):
    graph: GraphPayload
    operator: OperatorName = "combinatorial"
    sampler: SamplerSpec
    signal: list[float]


class SampleResponse(BaseModel):
    samples: list[float]


class SelectRequest(BaseModel):
    graph: GraphPayload
    operator: OperatorName = "combinatorial"
    criterion: str = Field(description="eopt | aopt | eopt-reg:gamma | localized:kernel | coherence:K | uniform")
    budget: int
    bandwidth: int | None = None
    seed: int = 0


class SelectResponse(BaseModel):
    ordered_nodes: list[int]
    per_step_score: list[float]
    criterion: str


class RecoverRequest(BaseModel):
    graph: GraphPayload
    operator: OperatorName = "combinatorial"
    model: str = Field(description="bandlimited:K | pgs:K:kernel | pwc")
    partition_cells: list[list[int]] | None = None
    sampler: SamplerSpec
    samples: list[float]


class RecoverResponse(BaseModel):
    reconstruction: list[float]
    residual_norm: float
    ds_condition_held: bool
    smallest_singular_value: float


class MatrixPayload(BaseModel):
    rows: int
    cols: int
    entries: list[tuple[int, int, float]]


class McSolveRequest(BaseModel):
    observed: MatrixPayload
    mask: list[tuple[int, int]]
    row_graph: GraphPayload
    col_graph: GraphPayload
    alpha: float
    beta: float
    tol: float = 1e-8


class McSolveResponse(BaseModel):
    solution: list[list[float]]
    residual: float
    objective: float


class McSampleRequest(BaseModel):
    row_graph: GraphPayload
    col_graph: GraphPayload
    strategy: Literal["greedy", "blcross"]
    alpha: float = 0.1
    beta: float = 0.1
    budget: int | None = None
    row_bandwidth: int | None = None
    col_bandwidth: int | None = None


class McSampleResponse(BaseModel):
    mask: list[tuple[int, int]]


class ExperimentRequest(BaseModel):
    experiment: str
    seed: int | None = None
    overrides: dict = Field(default_factory=dict)


class ExperimentResponse(BaseModel):
    experiment: str
    seed: int
    passed: bool
    report: dict
    series: dict[str, list[dict]]


class CheckPayload(BaseModel):
    name: str
    passed: bool
    detail: str


class SelftestResponse(BaseModel):
    all_passed: bool
    results: list[CheckPayload]
