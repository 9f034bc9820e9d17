from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from catwalk.corpus import complete, cycle, diamond, edgeless, path
from catwalk.errors import InputError
from catwalk.graph import DirectedGraph
from catwalk.oracle import (
    count_walks_exact,
    reachable,
    verify_concatenation,
    walk_table,
)

from conftest import digraphs


def test_length_zero_is_identity():
    g = diamond()
    for s in range(4):
        for t in range(4):
            assert count_walks_exact(g, s, t, 0) == (1 if s == t else 0)


def test_single_edge():
    g = DirectedGraph.from_edges(2, [(0, 1)])
    assert count_walks_exact(g, 0, 1, 1) == 1
    assert count_walks_exact(g, 1, 0, 1) == 0


def test_three_cycle_closed_walk():
    assert count_walks_exact(cycle(3), 0, 0, 3) == 1


def test_diamond_merges():
    assert count_walks_exact(diamond(), 0, 3, 2) == 2


def test_edgeless():
    assert count_walks_exact(edgeless(3), 0, 2, 1) == 0


def test_complete_with_loops_grows_as_power():
    g = complete(3, self_loops=True)
    # every step multiplies the choices by 3
    for length in range(5):
        assert count_walks_exact(g, 0, 1, length + 1) == 3**length


def test_counts_can_exceed_64_bits():
    g = complete(16, self_loops=True)
    assert count_walks_exact(g, 0, 0, 16) == 16**15


def test_validates_inputs():
    g = path(3)
    with pytest.raises(InputError):
        count_walks_exact(g, 0, 9, 1)
    with pytest.raises(InputError):
        count_walks_exact(g, 0, 1, -1)


@given(digraphs(max_n=6), st.integers(0, 4), st.integers(0, 4))
def test_concatenation_identity(g, a, b):
    assert verify_concatenation(g, a, b)


@given(digraphs(max_n=6), st.integers(0, 6))
def test_count_bounded_by_n_to_the_l(g, length):
    table = walk_table(g, length)
    for s in range(g.n):
        for t in range(g.n):
            assert table.count(s, t, length) <= g.n**length


@given(digraphs(max_n=6), st.integers(0, 5))
def test_transpose_symmetry(g, length):
    rev = DirectedGraph.from_edges(g.n, ((v, u) for u, v in g.edges))
    for s in range(g.n):
        for t in range(g.n):
            assert count_walks_exact(g, s, t, length) == count_walks_exact(
                rev, t, s, length
            )


@given(digraphs(max_n=6))
def test_reachable_matches_positive_counts(g):
    # s reaches t iff some length below n has a walk, given a loop at t
    for s in range(g.n):
        for t in range(g.n):
            has_walk = any(
                count_walks_exact(g, s, t, length) > 0 for length in range(g.n)
            )
            assert reachable(g, s, t) == has_walk


def test_walk_table_range_check():
    table = walk_table(path(3), 2)
    with pytest.raises(InputError):
        table.count(0, 0, 3)
