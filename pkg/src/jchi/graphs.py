"""Dual graphs of stable curves.

A :class:`StableGraph` is a connected multigraph with loops, a
non-negative genus per vertex, and distinctly labeled legs (markings).
Edges are stored as endpoint pairs; half-edges are derived positionally:
edge ``i`` owns half-edges ``2i`` (at its first endpoint) and ``2i + 1``,
and leg ``j`` (in storage order) owns half-edge ``2|E| + j``.  Edge
subsets are frozensets of edge indices.

Graphs are immutable; every edit builds a new value.
"""

from __future__ import annotations

import json
from functools import cached_property
from typing import Iterable, Iterator

from .errors import BudgetExceeded, GraphValidationError

__all__ = [
    "StableGraph",
    "EdgeSubset",
    "b1",
    "delete_edges",
    "is_non_disconnecting",
    "is_spanning_tree",
    "connected_spanning_subgraphs",
    "graph_to_json_dict",
    "graph_from_json_dict",
    "load_graph",
    "dump_graph",
]

EdgeSubset = frozenset[int]

DEFAULT_SUBSET_BUDGET = 2**22


class StableGraph:
    """Vertex-genus-labeled multigraph with loops and labeled legs.

    Parameters
    ----------
    genera:
        Genus of each vertex, indexed 0..V-1.
    edges:
        Endpoint pairs ``(u, v)``; a loop has ``u == v``.  Order of the
        pairs and of the endpoints within a pair fixes the half-edge
        numbering and is preserved.
    legs:
        ``(vertex, label)`` pairs; labels must be exactly 1..n.
    require_stable:
        Enforce 2g(v) - 2 + n(v) > 0 at every vertex.  Edge deletion
        produces graphs where this fails, so it is optional.
    require_connected:
        Enforce connectedness.  Also relaxed for deletion results.
    """

    def __init__(
        self,
        genera: Iterable[int],
        edges: Iterable[tuple[int, int]],
        legs: Iterable[tuple[int, int]] = (),
        require_stable: bool = True,
        require_connected: bool = True,
    ):
        self.genera: tuple[int, ...] = tuple(int(g) for g in genera)
        self.edges: tuple[tuple[int, int], ...] = tuple(
            (int(u), int(v)) for u, v in edges
        )
        self.legs: tuple[tuple[int, int], ...] = tuple(
            (int(v), int(lab)) for v, lab in legs
        )
        self._validate(require_stable, require_connected)

    def _validate(self, require_stable: bool, require_connected: bool) -> None:
        n_vertices = len(self.genera)
        if n_vertices == 0:
            raise GraphValidationError("graph has no vertices")
        for v, g in enumerate(self.genera):
            if g < 0:
                raise GraphValidationError(f"vertex {v} has negative genus {g}")
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise GraphValidationError(
                    f"edge {i} endpoint out of range: ({u}, {v})"
                )
        labels = sorted(lab for _, lab in self.legs)
        if labels != list(range(1, len(labels) + 1)):
            raise GraphValidationError(
                f"leg labels must be exactly 1..{len(labels)}, got {labels}"
            )
        for v, lab in self.legs:
            if not 0 <= v < n_vertices:
                raise GraphValidationError(
                    f"leg {lab} attached to missing vertex {v}"
                )
        if require_connected and not self.is_connected:
            raise GraphValidationError("graph is not connected")
        if require_stable:
            for v in range(n_vertices):
                slack = 2 * self.genera[v] - 2 + self.vertex_valence(v)
                if slack <= 0:
                    raise GraphValidationError(
                        f"vertex {v} unstable: 2g-2+n = {slack}"
                    )

    # -- basic counts ------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_legs(self) -> int:
        return len(self.legs)

    @cached_property
    def _degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def _leg_counts(self) -> tuple[int, ...]:
        cnt = [0] * self.n_vertices
        for v, _ in self.legs:
            cnt[v] += 1
        return tuple(cnt)

    def vertex_degree(self, v: int) -> int:
        """Number of edge half-edges at v (loops count twice)."""
        return self._degrees[v]

    def leg_count(self, v: int) -> int:
        return self._leg_counts[v]

    def vertex_valence(self, v: int) -> int:
        """n(v): edge half-edges plus legs at v."""
        return self._degrees[v] + self._leg_counts[v]

    def legs_at(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(lab for w, lab in self.legs if w == v))

    def loops_at(self, v: int) -> int:
        return sum(1 for u, w in self.edges if u == w == v)

    @cached_property
    def genus(self) -> int:
        """Total genus: sum of vertex genera plus b_1."""
        return sum(self.genera) + self.b1

    @cached_property
    def b1(self) -> int:
        """First Betti number |E| - |V| + #components."""
        return self.n_edges - self.n_vertices + self._n_components

    @cached_property
    def _n_components(self) -> int:
        return _component_count(self.n_vertices, self.edges)

    @cached_property
    def is_connected(self) -> bool:
        return self._n_components == 1

    # -- half-edge view ----------------------------------------------

    @cached_property
    def half_edge_vertices(self) -> tuple[int, ...]:
        """Vertex carrying each half-edge, edge half-edges first."""
        out: list[int] = []
        for u, v in self.edges:
            out.append(u)
            out.append(v)
        for v, _ in self.legs:
            out.append(v)
        return tuple(out)

    @cached_property
    def edge_pairing(self) -> tuple[tuple[int, int], ...]:
        """The fixed-point-free involution on edge half-edges."""
        return tuple((2 * i, 2 * i + 1) for i in range(self.n_edges))

    def leg_half_edge(self, leg_index: int) -> int:
        return 2 * self.n_edges + leg_index

    # -- value semantics ---------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StableGraph):
            return NotImplemented
        return (
            self.genera == other.genera
            and self.edges == other.edges
            and self.legs == other.legs
        )

    def __hash__(self) -> int:
        return hash((self.genera, self.edges, self.legs))

    def __repr__(self) -> str:
        return (
            f"StableGraph(genera={self.genera}, edges={list(self.edges)}, "
            f"legs={list(self.legs)})"
        )


def _component_count(n_vertices: int, edges: Iterable[tuple[int, int]]) -> int:
    parent = list(range(n_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n_vertices
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count


def b1(graph: StableGraph) -> int:
    """|E| - |V| + 1 for a connected graph (per component otherwise)."""
    return graph.b1


def delete_edges(graph: StableGraph, subset: EdgeSubset) -> StableGraph:
    """Remove the edges in ``subset``; vertices, genera and legs stay.

    The result keeps the surviving edges in their original relative
    order (new edge ``j`` is old edge ``sorted(kept)[j]``) and may be
    disconnected or unstable; check ``result.is_connected``.
    """
    _check_edge_subset(graph, subset)
    kept = [e for i, e in enumerate(graph.edges) if i not in subset]
    return StableGraph(
        graph.genera,
        kept,
        graph.legs,
        require_stable=False,
        require_connected=False,
    )


def retained_edge_indices(graph: StableGraph, subset: EdgeSubset) -> tuple[int, ...]:
    """Old edge index of each edge of ``delete_edges(graph, subset)``."""
    return tuple(i for i in range(graph.n_edges) if i not in subset)


def is_non_disconnecting(graph: StableGraph, subset: EdgeSubset) -> bool:
    """True iff removing ``subset`` leaves the graph connected."""
    _check_edge_subset(graph, subset)
    kept = (e for i, e in enumerate(graph.edges) if i not in subset)
    return _component_count(graph.n_vertices, kept) == 1


def is_spanning_tree(graph: StableGraph, subset: EdgeSubset) -> bool:
    """True iff ``subset`` spans all vertices, is connected, and has |V|-1 edges."""
    _check_edge_subset(graph, subset)
    if len(subset) != graph.n_vertices - 1:
        return False
    chosen = (graph.edges[i] for i in subset)
    return _component_count(graph.n_vertices, chosen) == 1


def connected_spanning_subgraphs(
    graph: StableGraph, budget: int = DEFAULT_SUBSET_BUDGET
) -> list[EdgeSubset]:
    """All edge subsets G with (V, G) connected, sorted canonically.

    Sorted by (size, indices).  Raises BudgetExceeded when 2^|E| would
    exceed ``budget``.
    """
    n_edges = graph.n_edges
    if 2**n_edges > budget:
        raise BudgetExceeded(
            f"2^{n_edges} edge subsets exceed the budget of {budget}"
        )
    out: list[EdgeSubset] = []
    for subset in _iter_subsets(n_edges):
        chosen = (graph.edges[i] for i in subset)
        if _component_count(graph.n_vertices, chosen) == 1:
            out.append(frozenset(subset))
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


def _iter_subsets(n: int) -> Iterator[tuple[int, ...]]:
    for mask in range(2**n):
        yield tuple(i for i in range(n) if mask >> i & 1)


def _check_edge_subset(graph: StableGraph, subset: EdgeSubset) -> None:
    for i in subset:
        if not 0 <= i < graph.n_edges:
            raise GraphValidationError(
                f"edge index {i} out of range for a graph with {graph.n_edges} edges"
            )


# -- JSON file format ----------------------------------------------------


def graph_to_json_dict(graph: StableGraph) -> dict:
    return {
        "vertices": [{"genus": g} for g in graph.genera],
        "edges": [[u, v] for u, v in graph.edges],
        "legs": [{"vertex": v, "label": lab} for v, lab in graph.legs],
    }


def graph_from_json_dict(data: dict, require_stable: bool = True) -> StableGraph:
    """Build a graph from the JSON form.

    Half-edges are numbered deterministically from file order: the two
    half-edges of each listed edge first (first endpoint first), then
    the legs in listed order.
    """
    try:
        genera = [v["genus"] for v in data["vertices"]]
        edges = [(e[0], e[1]) for e in data["edges"]]
        legs = [(l["vertex"], l["label"]) for l in data.get("legs", [])]
    except (KeyError, TypeError, IndexError) as exc:
        raise GraphValidationError(f"malformed graph document: {exc}") from exc
    return StableGraph(genera, edges, legs, require_stable=require_stable)


def dump_graph(graph: StableGraph) -> str:
    return json.dumps(graph_to_json_dict(graph), indent=2)


def load_graph(text: str, require_stable: bool = True) -> StableGraph:
    return graph_from_json_dict(json.loads(text), require_stable=require_stable)
