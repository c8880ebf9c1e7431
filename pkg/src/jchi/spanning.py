"""Spanning-tree counting and enumeration.

The count is a Laplacian cofactor (matrix-tree); loops are stripped
before assembly since no spanning tree contains one.  Explicit
enumeration is the independent oracle for the count.
"""

from __future__ import annotations

import itertools

from .arith import int_determinant
from .errors import BudgetExceeded
from .graphs import EdgeSubset, StableGraph, is_spanning_tree

__all__ = ["laplacian", "spanning_tree_count", "enumerate_spanning_trees"]

DEFAULT_TREE_BUDGET = 2**22


def _restricted_edges(
    graph: StableGraph, edges: EdgeSubset | None
) -> list[tuple[int, int]]:
    if edges is None:
        return list(graph.edges)
    return [graph.edges[i] for i in edges]


def laplacian(graph: StableGraph, edges: EdgeSubset | None = None) -> list[list[int]]:
    """Vertex Laplacian of the (optionally edge-restricted) graph.

    Diagonal (v, v) counts non-loop edge endpoints at v; off-diagonal
    (u, w) is minus the number of edges joining u and w.  Loops
    contribute nothing, so rows sum to zero.
    """
    n = graph.n_vertices
    mat = [[0] * n for _ in range(n)]
    for u, v in _restricted_edges(graph, edges):
        if u == v:
            continue
        mat[u][u] += 1
        mat[v][v] += 1
        mat[u][v] -= 1
        mat[v][u] -= 1
    return mat


def spanning_tree_count(graph: StableGraph, edges: EdgeSubset | None = None) -> int:
    """Number of spanning trees, by a fixed Laplacian cofactor.

    A disconnected (restricted) graph has no spanning tree and returns
    0 by convention.
    """
    n = graph.n_vertices
    if n == 1:
        return 1
    mat = laplacian(graph, edges)
    reduced = [row[: n - 1] for row in mat[: n - 1]]
    return int_determinant(reduced)


def enumerate_spanning_trees(
    graph: StableGraph, budget: int = DEFAULT_TREE_BUDGET
) -> list[EdgeSubset]:
    """All spanning trees as edge subsets, sorted canonically."""
    n = graph.n_vertices
    candidates = [i for i, (u, v) in enumerate(graph.edges) if u != v]
    k = n - 1
    if k > len(candidates):
        return []
    total = 1
    for i in range(k):
        total = total * (len(candidates) - i) // (i + 1)
    if total > budget:
        raise BudgetExceeded(
            f"{total} candidate edge subsets exceed the budget of {budget}"
        )
    out = [
        frozenset(combo)
        for combo in itertools.combinations(candidates, k)
        if is_spanning_tree(graph, frozenset(combo))
    ]
    out.sort(key=sorted)
    return out
