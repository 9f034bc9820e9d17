"""Directed graphs with residue-class partitioning.

Vertices are 0-based.  For a partition parameter k, vertex v splits as
v = slot*k + residue with slot = v // k and residue = v % k; a register
block sized ceil(n/k) is indexed by slot.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import GraphFormatError, InputError

log = logging.getLogger(__name__)

Edge = tuple[int, int]


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable digraph: n vertices, lexicographically sorted edge list.

    Self-loops are allowed, parallel edges are not.  Immutability makes
    concurrent reads safe and lets derived structures (residue buckets)
    be cached against the instance.
    """

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphFormatError(f"vertex count must be >= 1, got {self.n}")
        prev = None
        for u, v in self.edges:
            if not (0 <= u < self.n) or not (0 <= v < self.n):
                raise GraphFormatError(
                    f"edge ({u},{v}) has an endpoint out of range for n={self.n}"
                )
            if prev is not None and prev >= (u, v):
                raise GraphFormatError("edge list must be sorted and duplicate-free")
            prev = (u, v)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "DirectedGraph":
        """Build a normalized graph: sorts edges, drops duplicates silently."""
        return cls(n, tuple(sorted({(int(u), int(v)) for u, v in edges})))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges


@dataclass(frozen=True)
class ResidueIndex:
    """Decomposition of a vertex for partition parameter k: v = slot*k + residue."""

    k: int
    slot: int
    residue: int

    @property
    def vertex(self) -> int:
        return self.slot * self.k + self.residue


def parse_graph(text: str | bytes) -> DirectedGraph:
    """Parse the edge-list format.

    Line 1 is `n m`, followed by m lines `u v` (0-based decimal).  Lines
    starting with `#` and blank lines are ignored.  Duplicate edges are
    dropped with a warning on the diagnostic log; structural errors carry
    the offending line number.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    n = m_declared = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        nums = []
        for tok in parts:
            try:
                nums.append(int(tok))
            except ValueError:
                raise GraphFormatError(f"line {lineno}: non-integer token {tok!r}") from None
        if n is None:
            if len(nums) != 2:
                raise GraphFormatError(f"line {lineno}: header must be 'n m'")
            n, m_declared = nums
            if n < 1:
                raise GraphFormatError(f"line {lineno}: vertex count must be >= 1")
            if m_declared < 0:
                raise GraphFormatError(f"line {lineno}: edge count must be >= 0")
            continue
        if len(nums) != 2:
            raise GraphFormatError(f"line {lineno}: edge line must be 'u v'")
        u, v = nums
        for endpoint in (u, v):
            if not (0 <= endpoint < n):
                raise GraphFormatError(
                    f"line {lineno}: endpoint {endpoint} out of range for n={n}"
                )
        edges.append((u, v))
    if n is None:
        raise GraphFormatError("empty input: missing 'n m' header")
    if len(edges) != m_declared:
        raise GraphFormatError(
            f"header declares {m_declared} edges but {len(edges)} edge lines found"
        )
    unique = sorted(set(edges))
    if len(unique) < len(edges):
        log.warning("dropped %d duplicate edge(s) during parse", len(edges) - len(unique))
    return DirectedGraph(n, tuple(unique))


def serialize_graph(g: DirectedGraph) -> str:
    """Normalized text form; parse_graph(serialize_graph(g)) reproduces g."""
    lines = [f"{g.n} {len(g.edges)}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def add_self_loop(g: DirectedGraph, t: int) -> DirectedGraph:
    """Return g with edge (t,t) present; g itself if already there."""
    if not (0 <= t < g.n):
        raise InputError(f"vertex {t} out of range for n={g.n}")
    if (t, t) in g.edges:
        return g
    return DirectedGraph.from_edges(g.n, g.edges + ((t, t),))


def residue_decompose(v: int, k: int) -> ResidueIndex:
    if k < 1:
        raise InputError(f"partition parameter must be >= 1, got {k}")
    if v < 0:
        raise InputError(f"vertex must be >= 0, got {v}")
    return ResidueIndex(k=k, slot=v // k, residue=v % k)


def edges_between_residues(
    g: DirectedGraph, i: int, j: int, k: int, reverse: bool = False
) -> Iterator[Edge]:
    """Edges (u,v) with u = i and v = j mod k, in lexicographic order.

    With reverse set, yields the exact reverse order (used by inverse
    sweeps so update sequences mirror bit-exactly).
    """
    if k < 1:
        raise InputError(f"partition parameter must be >= 1, got {k}")
    if not (0 <= i < k) or not (0 <= j < k):
        raise InputError(f"residues ({i},{j}) out of range for k={k}")
    source = reversed(g.edges) if reverse else g.edges
    for u, v in source:
        if u % k == i and v % k == j:
            yield (u, v)


def slots_per_residue(n: int, k: int) -> int:
    """Registers needed per block: ceil(n/k).  Trailing slots of short
    residue classes stay inert."""
    if k < 1:
        raise InputError(f"partition parameter must be >= 1, got {k}")
    return -(-n // k)


def random_digraph(n: int, p: float, seed: int, self_loops: bool = False) -> DirectedGraph:
    """Seeded Erdos-Renyi digraph: each ordered pair independently with
    probability p.  Self-loops excluded unless requested."""
    if n < 1:
        raise InputError(f"vertex count must be >= 1, got {n}")
    if not (0.0 <= p <= 1.0):
        raise InputError(f"edge probability must be in [0,1], got {p}")
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        for v in range(n):
            if u == v and not self_loops:
                continue
            if rng.random() < p:
                edges.append((u, v))
    return DirectedGraph.from_edges(n, edges)
