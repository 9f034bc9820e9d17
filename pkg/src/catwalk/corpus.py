"""Small named graphs plus a seeded random family, shared by tests and benches."""

from __future__ import annotations

from .graph import DirectedGraph, add_self_loop, random_digraph


def path(n: int) -> DirectedGraph:
    """Directed path 0 -> 1 -> ... -> n-1."""
    return DirectedGraph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> DirectedGraph:
    """Directed cycle on n vertices."""
    return DirectedGraph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def diamond() -> DirectedGraph:
    """Two parallel length-2 routes from 0 to 3."""
    return DirectedGraph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def complete(n: int, self_loops: bool = False) -> DirectedGraph:
    edges = [(u, v) for u in range(n) for v in range(n) if self_loops or u != v]
    return DirectedGraph.from_edges(n, edges)


def edgeless(n: int) -> DirectedGraph:
    return DirectedGraph.from_edges(n, [])


def standard_family() -> dict[str, DirectedGraph]:
    """Hand-picked shapes exercising the interesting structure: no walks at
    all, exactly one walk, merging walks, dense counts, self-loops."""
    return {
        "path3": path(3),
        "path6": path(6),
        "cycle4": cycle(4),
        "cycle5": cycle(5),
        "diamond": diamond(),
        "complete3": complete(3),
        "complete3_selfloops": complete(3, self_loops=True),
        "complete4": complete(4),
        "edgeless2": edgeless(2),
        "loop_at_target": add_self_loop(path(4), 3),
    }


def random_family(count: int = 50, seed: int = 1729) -> list[DirectedGraph]:
    """Seeded Erdos-Renyi corpus, sizes cycling over 2..10, p = 0.3."""
    out = []
    for i in range(count):
        n = 2 + (i % 9)
        out.append(random_digraph(n, 0.3, seed=seed + i))
    return out
