"""Request and response models for the HTTP service (and the CLI client).

Counts are decimal strings in responses: they are exact big integers and
JSON number handling must not be trusted with them.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from .crt import CrtWitness, RunStats
from .errors import InputError
from .graph import DirectedGraph, parse_graph


class GraphSpec(BaseModel):
    """A graph, either as the text format (header 'n m', then edge lines)
    or as an explicit vertex count plus edge list."""

    graph_text: str | None = None
    n: int | None = None
    edges: list[tuple[int, int]] | None = None

    def to_graph(self) -> DirectedGraph:
        if self.graph_text is not None:
            if self.n is not None or self.edges is not None:
                raise InputError("give either graph_text or n/edges, not both")
            return parse_graph(self.graph_text)
        if self.n is None:
            raise InputError("graph needs graph_text or a vertex count n")
        return DirectedGraph.from_edges(self.n, self.edges or [])

    @classmethod
    def from_graph(cls, g: DirectedGraph) -> "GraphSpec":
        return cls(n=g.n, edges=list(g.edges))


class MetricsRecord(BaseModel):
    """One run's accounting; field order is the stable JSON key order."""

    n: int
    k: int
    length: int
    moduli: list[int]
    catalyst_bits: int
    peak_workspace_bits: int
    peak_stack_depth: int
    runs: int
    seed: int
    wall_time_s: float

    @classmethod
    def from_stats(cls, stats: RunStats) -> "MetricsRecord":
        return cls(
            n=stats.n,
            k=stats.k,
            length=stats.length,
            moduli=stats.moduli,
            catalyst_bits=stats.catalyst_bits,
            peak_workspace_bits=stats.peak_workspace_bits,
            peak_stack_depth=stats.peak_stack_depth,
            runs=stats.runs,
            seed=stats.seed,
            wall_time_s=stats.wall_time_s,
        )


class WitnessRecord(BaseModel):
    moduli: list[int]
    residues: list[int]
    value: str

    @classmethod
    def from_witness(cls, w: CrtWitness) -> "WitnessRecord":
        return cls(moduli=list(w.moduli), residues=list(w.residues), value=str(w.value))


class CountWalksRequest(BaseModel):
    graph: GraphSpec
    source: int
    target: int
    length: int
    k: int = 1
    seed: int = 0
    strict_paper: bool = False
    packed: bool = False
    parallel_moduli: bool = False
    trace: bool = False


class CountWalksResponse(BaseModel):
    count: str
    witness: WitnessRecord
    metrics: MetricsRecord
    trace: list[str] | None = None


class StconRequest(BaseModel):
    graph: GraphSpec
    source: int
    target: int
    k: int = 1
    seed: int = 0
    strict_paper: bool = False
    packed: bool = False
    parallel_moduli: bool = False


class StconResponse(BaseModel):
    reachable: bool
    verdict: str
    metrics: MetricsRecord


class CheckRecord(BaseModel):
    name: str
    passed: bool
    cases: int
    detail: str


class VerifyRequest(BaseModel):
    graph: GraphSpec | None = None
    seeds: int = Field(default=10, ge=1)
    fault: str | None = None
    packed: bool = False
    base_seed: int = 20240


class VerifyResponse(BaseModel):
    passed: bool
    checks: list[CheckRecord]


class BenchRequest(BaseModel):
    sizes: list[int] = Field(default_factory=lambda: [4, 8, 16])
    ks: list[int] = Field(default_factory=lambda: [1, 2, 4])
    q: int = 11
    seed: int = 0


class BenchResponse(BaseModel):
    records: list[MetricsRecord]
