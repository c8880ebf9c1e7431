"""Canonical forms, isomorphism, and automorphism counting for graphs.

Isomorphisms here are half-edge bijections preserving vertex assignment,
the edge pairing, vertex genera, and fixing every leg label pointwise.
The canonical key of a graph is the minimum of a serialized encoding
over all vertex orderings compatible with an iterated-refinement
coloring; a brute-force search over half-edge bijections doubles as the
test oracle for small graphs.
"""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable, Iterator, Sequence

from .graphs import EdgeSubset, StableGraph

__all__ = [
    "canonical_key",
    "canonical_form",
    "canonical_marked_form",
    "marked_key",
    "min_encoding",
    "refine_colors",
    "vertex_automorphisms",
    "edge_symmetry_factor",
    "aut_order",
    "aut_order_marked",
    "brute_force_isomorphic",
    "brute_force_aut_order",
]


# -- vertex coloring and refinement ---------------------------------------


def _rank_compress(tokens: Sequence[Hashable]) -> tuple[int, ...]:
    order = {tok: i for i, tok in enumerate(sorted(set(tokens)))}
    return tuple(order[tok] for tok in tokens)


def refine_colors(
    n_vertices: int,
    edges: Sequence[tuple[int, int]],
    payload: Sequence[Hashable],
    edge_labels: Sequence[int] | None = None,
) -> tuple[int, ...]:
    """Iterated neighborhood refinement of the initial vertex colors.

    The result refines ``payload`` and is invariant under relabeling, so
    it can seed both canonical forms and automorphism search.
    """
    colors = _rank_compress(payload)
    if n_vertices == 1:
        return colors
    if edge_labels is None:
        nbrs: list[list[int]] = [[] for _ in range(n_vertices)]
        loop_sig: list[int] = [0] * n_vertices
        for a, b in edges:
            if a == b:
                loop_sig[a] += 1
            else:
                nbrs[a].append(b)
                nbrs[b].append(a)
        while True:
            sigs = [
                (
                    colors[v],
                    loop_sig[v],
                    tuple(sorted(colors[w] for w in nbrs[v])),
                )
                for v in range(n_vertices)
            ]
            new = _rank_compress(sigs)
            if new == colors:
                return colors
            colors = new
    else:
        lnbrs: list[list[tuple[int, int]]] = [[] for _ in range(n_vertices)]
        lloops: list[list[int]] = [[] for _ in range(n_vertices)]
        for (a, b), lab in zip(edges, edge_labels):
            if a == b:
                lloops[a].append(lab)
            else:
                lnbrs[a].append((b, lab))
                lnbrs[b].append((a, lab))
        loop_part = [tuple(sorted(ls)) for ls in lloops]
        while True:
            sigs = [
                (
                    colors[v],
                    loop_part[v],
                    tuple(sorted((colors[w], lab) for w, lab in lnbrs[v])),
                )
                for v in range(n_vertices)
            ]
            new = _rank_compress(sigs)
            if new == colors:
                return colors
            colors = new


def _color_groups(colors: Sequence[int]) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        groups.setdefault(c, []).append(v)
    return [groups[c] for c in sorted(groups)]


def _iter_orders(groups: list[list[int]]) -> Iterator[tuple[int, ...]]:
    """All vertex orders that keep each color group contiguous, with the
    groups in color-rank order."""
    for perm_combo in itertools.product(
        *(itertools.permutations(g) for g in groups)
    ):
        yield tuple(itertools.chain.from_iterable(perm_combo))


def _encode(
    order: Sequence[int],
    payload: Sequence[Hashable],
    edges: Sequence[tuple[int, int]],
    edge_labels: Sequence[int] | None,
) -> tuple:
    pos = [0] * len(order)
    for i, v in enumerate(order):
        pos[v] = i
    payload_part = tuple(payload[v] for v in order)
    if edge_labels is None:
        edge_part = tuple(
            sorted(
                (pos[a], pos[b]) if pos[a] <= pos[b] else (pos[b], pos[a])
                for a, b in edges
            )
        )
    else:
        edge_part = tuple(
            sorted(
                (pos[a], pos[b], lab) if pos[a] <= pos[b] else (pos[b], pos[a], lab)
                for (a, b), lab in zip(edges, edge_labels)
            )
        )
    return (payload_part, edge_part)


def min_encoding(
    n_vertices: int,
    edges: Sequence[tuple[int, int]],
    payload: Sequence[Hashable],
    edge_labels: Sequence[int] | None = None,
) -> tuple[tuple, tuple[int, ...]]:
    """Minimal encoding over admissible vertex orders, with its order."""
    colors = refine_colors(n_vertices, edges, payload, edge_labels)
    groups = _color_groups(colors)
    if all(len(g) == 1 for g in groups):
        order = tuple(g[0] for g in groups)
        return _encode(order, payload, edges, edge_labels), order
    best = None
    best_order = None
    for order in _iter_orders(groups):
        enc = _encode(order, payload, edges, edge_labels)
        if best is None or enc < best:
            best = enc
            best_order = order
    assert best is not None and best_order is not None
    return best, best_order


def vertex_automorphisms(
    n_vertices: int,
    edges: Sequence[tuple[int, int]],
    payload: Sequence[Hashable],
    edge_labels: Sequence[int] | None = None,
) -> list[tuple[int, ...]]:
    """All payload-preserving vertex permutations preserving the
    (labeled) edge multiset.  Entry ``tau[v]`` is the image of v."""
    labels = edge_labels if edge_labels is not None else [0] * len(edges)
    pair_profile: dict[tuple[int, int], list[int]] = {}
    for (a, b), lab in zip(edges, labels):
        key = (a, b) if a <= b else (b, a)
        pair_profile.setdefault(key, []).append(lab)
    profile = {k: sorted(v) for k, v in pair_profile.items()}

    colors = refine_colors(n_vertices, edges, payload, edge_labels)
    groups = _color_groups(colors)
    autos: list[tuple[int, ...]] = []
    for order_combo in itertools.product(
        *(itertools.permutations(g) for g in groups)
    ):
        tau = [0] * n_vertices
        for group, image in zip(groups, order_combo):
            for src, dst in zip(group, image):
                tau[src] = dst
        ok = True
        for (a, b), labs in profile.items():
            ta, tb = tau[a], tau[b]
            key = (ta, tb) if ta <= tb else (tb, ta)
            if profile.get(key) != labs:
                ok = False
                break
        if ok:
            autos.append(tuple(tau))
    return autos


# -- graph-level API -------------------------------------------------------


def _leg_payload(graph: StableGraph) -> list[Hashable]:
    return [(graph.genera[v], graph.legs_at(v)) for v in range(graph.n_vertices)]


def canonical_key(graph: StableGraph) -> bytes:
    """Byte string equal for two graphs iff they are isomorphic
    (leg labels fixed pointwise)."""
    enc, _ = min_encoding(graph.n_vertices, graph.edges, _leg_payload(graph))
    return repr(enc).encode("ascii")


def canonical_form(graph: StableGraph) -> StableGraph:
    """The canonically relabeled representative of the iso class."""
    enc, order = min_encoding(graph.n_vertices, graph.edges, _leg_payload(graph))
    return _rebuild(graph, order, enc[1])


def marked_key(graph: StableGraph, tree: EdgeSubset) -> bytes:
    """Canonical key of the pair (graph, spanning edge set)."""
    bits = [1 if i in tree else 0 for i in range(graph.n_edges)]
    enc, _ = min_encoding(graph.n_vertices, graph.edges, _leg_payload(graph), bits)
    return repr(enc).encode("ascii")


def canonical_marked_form(
    graph: StableGraph, tree: EdgeSubset
) -> tuple[StableGraph, EdgeSubset]:
    """Canonically relabeled (graph, edge subset) pair."""
    bits = [1 if i in tree else 0 for i in range(graph.n_edges)]
    enc, order = min_encoding(graph.n_vertices, graph.edges, _leg_payload(graph), bits)
    labeled_edges = enc[1]
    new_graph = _rebuild(graph, order, [(a, b) for a, b, _ in labeled_edges])
    new_tree = frozenset(i for i, (_, _, bit) in enumerate(labeled_edges) if bit)
    return new_graph, new_tree


def _rebuild(
    graph: StableGraph, order: Sequence[int], new_edges: Iterable[tuple[int, int]]
) -> StableGraph:
    pos = {v: i for i, v in enumerate(order)}
    genera = tuple(graph.genera[v] for v in order)
    legs = sorted(((pos[v], lab) for v, lab in graph.legs), key=lambda t: t[1])
    return StableGraph(
        genera,
        list(new_edges),
        legs,
        require_stable=False,
        require_connected=False,
    )


def edge_symmetry_factor(
    edges: Sequence[tuple[int, int]], tree: EdgeSubset | None
) -> int:
    """Half-edge symmetries compatible with any one vertex map: parallel
    edges may be permuted (respecting tree membership), loops permuted
    and flipped."""
    from math import factorial

    pair_total: dict[tuple[int, int], int] = {}
    pair_tree: dict[tuple[int, int], int] = {}
    loops: dict[int, int] = {}
    for i, (a, b) in enumerate(edges):
        if a == b:
            loops[a] = loops.get(a, 0) + 1
        else:
            key = (a, b) if a <= b else (b, a)
            pair_total[key] = pair_total.get(key, 0) + 1
            if tree is not None and i in tree:
                pair_tree[key] = pair_tree.get(key, 0) + 1
    factor = 1
    for key, m in pair_total.items():
        t = pair_tree.get(key, 0)
        factor *= factorial(t) * factorial(m - t)
    for count in loops.values():
        factor *= factorial(count) * 2**count
    return factor


def aut_order(graph: StableGraph) -> int:
    """Order of the half-edge automorphism group fixing every leg."""
    taus = vertex_automorphisms(graph.n_vertices, graph.edges, _leg_payload(graph))
    return len(taus) * edge_symmetry_factor(graph.edges, None)


def aut_order_marked(graph: StableGraph, tree: EdgeSubset) -> int:
    """Order of the subgroup of Aut mapping the edge set ``tree`` to itself."""
    bits = [1 if i in tree else 0 for i in range(graph.n_edges)]
    taus = vertex_automorphisms(
        graph.n_vertices, graph.edges, _leg_payload(graph), bits
    )
    return len(taus) * edge_symmetry_factor(graph.edges, tree)


# -- brute force oracle ----------------------------------------------------


class _HalfEdgeStructure:
    def __init__(self, graph: StableGraph):
        self.vertex_of = list(graph.half_edge_vertices)
        n = len(self.vertex_of)
        self.partner: list[int | None] = [None] * n
        for a, b in graph.edge_pairing:
            self.partner[a] = b
            self.partner[b] = a
        self.leg_label: list[int | None] = [None] * n
        for j, (_, lab) in enumerate(graph.legs):
            self.leg_label[graph.leg_half_edge(j)] = lab
        self.genera = graph.genera
        self.size = n


def _search_halfedge_maps(g1: StableGraph, g2: StableGraph, count_all: bool) -> int:
    """Exhaustive search over half-edge bijections g1 -> g2 preserving
    vertex assignment, pairing, genera, and leg labels.  Returns the
    number found (stopping at 1 when ``count_all`` is false)."""
    s1, s2 = _HalfEdgeStructure(g1), _HalfEdgeStructure(g2)
    if s1.size != s2.size or len(s1.genera) != len(s2.genera):
        return 0
    if sorted(s1.genera) != sorted(s2.genera):
        return 0
    size = s1.size
    image: list[int | None] = [None] * size
    used = [False] * size
    vmap: dict[int, int] = {}
    vmap_inv: dict[int, int] = {}
    found = 0

    def extend(h: int) -> None:
        nonlocal found
        if found and not count_all:
            return
        if h == size:
            found += 1
            return
        for h2 in range(size):
            if used[h2]:
                continue
            if s1.leg_label[h] != s2.leg_label[h2]:
                continue
            p1 = s1.partner[h]
            if (p1 is None) != (s2.partner[h2] is None):
                continue
            if p1 is not None and image[p1] is not None:
                if image[p1] != s2.partner[h2]:
                    continue
            v1, v2 = s1.vertex_of[h], s2.vertex_of[h2]
            if v1 in vmap:
                if vmap[v1] != v2:
                    continue
                new_pair = False
            else:
                if v2 in vmap_inv or s1.genera[v1] != s2.genera[v2]:
                    continue
                new_pair = True
            image[h] = h2
            used[h2] = True
            if new_pair:
                vmap[v1] = v2
                vmap_inv[v2] = v1
            extend(h + 1)
            image[h] = None
            used[h2] = False
            if new_pair:
                del vmap[v1]
                del vmap_inv[v2]
            if found and not count_all:
                return

    extend(0)
    return found


def brute_force_isomorphic(g1: StableGraph, g2: StableGraph) -> bool:
    """Exhaustive half-edge isomorphism search (test oracle)."""
    return _search_halfedge_maps(g1, g2, count_all=False) > 0


def brute_force_aut_order(graph: StableGraph) -> int:
    """Automorphism count by exhaustive half-edge search (test oracle)."""
    return _search_halfedge_maps(graph, graph, count_all=True)
