"""Reference walk counting by dynamic programming over exact integers.

This is the trusted baseline everything else is checked against.  It
uses unbounded Python ints, so no modular arithmetic and no overflow:
the count of length-l walks from s to t comes from l successive
vector-by-adjacency products.  Deliberately naive; never the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .graph import DirectedGraph


def _check_vertex(g: DirectedGraph, v: int, role: str) -> None:
    if not (0 <= v < g.n):
        raise InputError(f"{role} vertex {v} out of range for n={g.n}")


def walk_vector(g: DirectedGraph, s: int, length: int) -> list[int]:
    """Counts of length-`length` walks from s to every vertex."""
    _check_vertex(g, s, "source")
    if length < 0:
        raise InputError(f"walk length must be >= 0, got {length}")
    row = [0] * g.n
    row[s] = 1
    for _ in range(length):
        nxt = [0] * g.n
        for u, v in g.edges:
            nxt[v] += row[u]
        row = nxt
    return row


def count_walks_exact(g: DirectedGraph, s: int, t: int, length: int) -> int:
    """Exact N_length(s,t); length 0 counts the empty walk."""
    _check_vertex(g, t, "target")
    return walk_vector(g, s, length)[t]


@dataclass(frozen=True)
class WalkTable:
    """All-pairs counts for every length up to l_max: counts[l][s][t]."""

    n: int
    l_max: int
    counts: tuple[tuple[tuple[int, ...], ...], ...]

    def count(self, s: int, t: int, length: int) -> int:
        if not (0 <= length <= self.l_max):
            raise InputError(f"length {length} outside table range 0..{self.l_max}")
        return self.counts[length][s][t]


def walk_table(g: DirectedGraph, l_max: int) -> WalkTable:
    if l_max < 0:
        raise InputError(f"table length bound must be >= 0, got {l_max}")
    per_length = []
    rows = [[1 if s == t else 0 for t in range(g.n)] for s in range(g.n)]
    per_length.append(tuple(tuple(r) for r in rows))
    for _ in range(l_max):
        rows = [
            _step(g, rows[s])
            for s in range(g.n)
        ]
        per_length.append(tuple(tuple(r) for r in rows))
    return WalkTable(n=g.n, l_max=l_max, counts=tuple(per_length))


def _step(g: DirectedGraph, row: list[int] | tuple[int, ...]) -> tuple[int, ...]:
    nxt = [0] * g.n
    for u, v in g.edges:
        nxt[v] += row[u]
    return tuple(nxt)


def verify_concatenation(g: DirectedGraph, a: int, b: int) -> bool:
    """Walks of length a+b split at the vertex reached after a steps:
    N_{a+b}(i,j) must equal sum_u N_a(i,u) * N_b(u,j) for all pairs.
    The halving engine relies on exactly this identity."""
    if a < 0 or b < 0:
        raise InputError("segment lengths must be >= 0")
    table = walk_table(g, a + b)
    for i in range(g.n):
        for j in range(g.n):
            split = sum(
                table.count(i, u, a) * table.count(u, j, b) for u in range(g.n)
            )
            if split != table.count(i, j, a + b):
                return False
    return True


def reachable(g: DirectedGraph, s: int, t: int) -> bool:
    """Breadth-first reachability; every vertex reaches itself."""
    _check_vertex(g, s, "source")
    _check_vertex(g, t, "target")
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
    seen = {s}
    frontier = [s]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return t in seen
