"""Enumeration of stable graphs up to isomorphism.

Generation is two-staged.  Stage one enumerates "shapes": graphs whose
vertices carry (genus, leg count) colors but no leg labels, one
representative per color-preserving iso class.  Stage two distributes
the labeled legs over a shape, keeping one assignment per orbit of the
shape's automorphisms.  Euler-characteristic sums that only need
automorphism-weighted totals can work on shapes directly, which is what
keeps genus-3 and ten-marking runs at desk scale.

Also here: the gluing map from genus-0 trees (pairing off the last 2g
markings into edges) and its fiber census.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Iterator

from . import canon
from .canon import aut_order, aut_order_marked, canonical_key
from .errors import BudgetExceeded, GraphValidationError
from .graphs import EdgeSubset, StableGraph, is_spanning_tree
from .spanning import enumerate_spanning_trees, spanning_tree_count

__all__ = [
    "Shape",
    "MarkedGraph",
    "iter_shapes",
    "iter_stable_graphs",
    "enumerate_stable_graphs",
    "enumerate_marked",
    "glue_tree",
    "fiber_census",
    "expected_fiber_size",
    "aut_order",
    "aut_order_marked",
    "canonical_key",
]

DEFAULT_WORK_BUDGET = 100_000_000


@dataclass(frozen=True)
class Shape:
    """A stable graph with leg counts instead of labeled legs."""

    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    leg_counts: tuple[int, ...]

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    def valence(self, v: int) -> int:
        deg = sum((u == v) + (w == v) for u, w in self.edges)
        return deg + self.leg_counts[v]

    def payload(self) -> list[tuple[int, int]]:
        return list(zip(self.genera, self.leg_counts))

    def skeleton(self) -> StableGraph:
        """The underlying graph without legs (vertices may look unstable)."""
        return StableGraph(
            self.genera,
            self.edges,
            (),
            require_stable=False,
            require_connected=True,
        )

    def aut_order(self) -> int:
        taus = canon.vertex_automorphisms(
            self.n_vertices, self.edges, self.payload()
        )
        return len(taus) * canon.edge_symmetry_factor(self.edges, None)

    def spanning_tree_count(self) -> int:
        return spanning_tree_count(self.skeleton())


@dataclass(frozen=True)
class MarkedGraph:
    """A stable graph with a chosen spanning tree."""

    graph: StableGraph
    tree: EdgeSubset = field(default_factory=frozenset)

    def __post_init__(self):
        if not is_spanning_tree(self.graph, self.tree):
            raise GraphValidationError(
                f"edge set {sorted(self.tree)} is not a spanning tree"
            )


class _WorkMeter:
    __slots__ = ("budget", "used")

    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.budget:
            raise BudgetExceeded(
                f"enumeration exceeded the work budget of {self.budget}"
            )


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _genus_vectors(
    n_vertices: int, genus: int, genus0_only: bool
) -> Iterator[tuple[int, ...]]:
    """Nondecreasing genus tuples with sum at most ``genus``."""
    if genus0_only:
        yield (0,) * n_vertices
        return

    def rec(
        prefix: tuple[int, ...], lo: int, budget: int
    ) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n_vertices:
            yield prefix
            return
        for g in range(lo, budget + 1):
            yield from rec(prefix + (g,), g, budget - g)

    yield from rec((), 0, genus)


def _iter_colored_structures(
    n_vertices: int,
    n_edges: int,
    gvec: tuple[int, ...],
    n_legs: int,
    meter: _WorkMeter,
) -> Iterator[tuple[tuple[tuple[int, int], ...], tuple[int, ...]]]:
    """Connected edge multisets with per-vertex leg counts, jointly.

    Vertices are filled row by row: while row u is open, edges (u, w)
    with w >= u are appended in nondecreasing pair order; closing the
    row fixes the leg count of u.  Constraints that cut permuted
    duplicates without losing any class: (genus, leg count) colors are
    nondecreasing in position, and within a run of equal colors
    (degree, loops) is nondecreasing.  Every colored graph can be
    vertex-sorted to satisfy both, so one representative of each class
    always survives.
    """
    base = [3 - 2 * g for g in gvec]  # valence each vertex still needs
    deg = [0] * n_vertices
    loops = [0] * n_vertices
    kvec = [0] * n_vertices
    chosen: list[tuple[int, int]] = []
    later_same_genus = [
        sum(1 for w in range(u + 1, n_vertices) if gvec[w] == gvec[u])
        for u in range(n_vertices)
    ]

    def prefix_connected(row: int) -> bool:
        """No component may be stranded inside the closed prefix 0..row."""
        if n_vertices == 1:
            return True
        parent = list(range(n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in chosen:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        if len({find(w) for w in range(n_vertices)}) == 1:
            return True
        live = {find(w) for w in range(row + 1, n_vertices)}
        return all(find(w) in live for w in range(row + 1))

    def close_row(u: int, legs_left: int) -> Iterator[int]:
        """Leg counts that close row u legally; yields each choice."""
        lo = max(0, base[u] - deg[u])
        if u > 0 and gvec[u] == gvec[u - 1]:
            lo = max(lo, kvec[u - 1])
        if u == n_vertices - 1:
            choices = range(legs_left, legs_left + 1) if lo <= legs_left else range(0)
        else:
            hi = legs_left // (1 + later_same_genus[u])
            choices = range(lo, hi + 1)
        for k in choices:
            if (
                u > 0
                and gvec[u] == gvec[u - 1]
                and k == kvec[u - 1]
                and (deg[u], loops[u]) < (deg[u - 1], loops[u - 1])
            ):
                continue
            yield k

    def rec(
        row: int, w_floor: int, remaining: int, legs_left: int, deficit: int
    ) -> Iterator[tuple[tuple[tuple[int, int], ...], tuple[int, ...]]]:
        meter.tick()
        if deficit > legs_left + 2 * remaining:
            return
        if row == n_vertices:
            if remaining == 0:
                yield tuple(chosen), tuple(kvec)
            return
        # close the current row: pick its leg count, move on
        if prefix_connected(row):
            need = max(0, base[row] - deg[row])
            for k in close_row(row, legs_left):
                kvec[row] = k
                yield from rec(
                    row + 1, row + 1, remaining, legs_left - k, deficit - need
                )
            kvec[row] = 0
        # or append one more edge (row, w) with w >= w_floor
        if remaining:
            u = row
            for w in range(w_floor, n_vertices):
                du = 1 if deg[u] < base[u] else 0
                if u == w:
                    drop = min(2, max(0, base[u] - deg[u]))
                    deg[u] += 2
                    loops[u] += 1
                else:
                    dw = 1 if deg[w] < base[w] else 0
                    drop = du + dw
                    deg[u] += 1
                    deg[w] += 1
                chosen.append((u, w))
                yield from rec(row, w, remaining - 1, legs_left, deficit - drop)
                chosen.pop()
                if u == w:
                    deg[u] -= 2
                    loops[u] -= 1
                else:
                    deg[u] -= 1
                    deg[w] -= 1

    start_deficit = sum(max(0, b) for b in base)
    yield from rec(0, 0, n_edges, n_legs, start_deficit)


def iter_shapes(
    genus: int,
    legs: int,
    genus0_only: bool = False,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> Iterator[Shape]:
    """One representative per iso class of (genus, leg-count)-colored
    stable graphs of total genus ``genus`` with ``legs`` legs."""
    if 2 * genus - 2 + legs <= 0:
        raise ValueError(f"(g, n) = ({genus}, {legs}) is unstable")
    meter = _WorkMeter(work_budget)
    seen: set[tuple] = set()
    max_vertices = max(1, 2 * genus + legs - 2)
    for n_vertices in range(1, max_vertices + 1):
        for gvec in _genus_vectors(n_vertices, genus, genus0_only):
            n_edges = genus - sum(gvec) + n_vertices - 1
            if n_edges < 0:
                continue
            for edges, kvec in _iter_colored_structures(
                n_vertices, n_edges, gvec, legs, meter
            ):
                colors = tuple(zip(gvec, kvec))
                key, _ = canon.min_encoding(n_vertices, edges, colors)
                if key in seen:
                    continue
                seen.add(key)
                yield Shape(gvec, edges, kvec)


def _leg_assignments(
    leg_counts: tuple[int, ...], meter: _WorkMeter
) -> Iterator[tuple[int, ...]]:
    """All placements of labels 1..n with the prescribed per-vertex
    counts, as tuples (position i = vertex of label i+1)."""
    n = sum(leg_counts)
    counts = list(leg_counts)
    slot: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        meter.tick()
        if len(slot) == n:
            yield tuple(slot)
            return
        for v, c in enumerate(counts):
            if c:
                counts[v] -= 1
                slot.append(v)
                yield from rec()
                slot.pop()
                counts[v] += 1

    yield from rec()


def iter_stable_graphs(
    genus: int,
    legs: int,
    genus0_only: bool = False,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> Iterator[StableGraph]:
    """Stream one representative per iso class (unsorted)."""
    meter = _WorkMeter(work_budget)
    for shape in iter_shapes(genus, legs, genus0_only, work_budget):
        taus = [
            t
            for t in canon.vertex_automorphisms(
                shape.n_vertices, shape.edges, shape.payload()
            )
            if any(t[i] != i for i in range(shape.n_vertices))
        ]
        for assignment in _leg_assignments(shape.leg_counts, meter):
            if any(
                tuple(tau[v] for v in assignment) < assignment for tau in taus
            ):
                continue
            legs_list = [(v, i + 1) for i, v in enumerate(assignment)]
            yield StableGraph(shape.genera, shape.edges, legs_list)


def enumerate_stable_graphs(
    genus: int,
    legs: int,
    genus0_only: bool = False,
    work_budget: int = DEFAULT_WORK_BUDGET,
) -> list[StableGraph]:
    """All stable graphs of genus ``genus`` with legs 1..``legs`` up to
    isomorphism, in canonical-key order."""
    out = list(iter_stable_graphs(genus, legs, genus0_only, work_budget))
    out.sort(key=canonical_key)
    return out


# -- marked graphs, gluing, census ----------------------------------------


def enumerate_marked(
    genus: int, legs: int, work_budget: int = DEFAULT_WORK_BUDGET
) -> list[MarkedGraph]:
    """One representative per iso class of (graph, spanning tree) pairs
    over the all-genus-0 graphs."""
    out: list[MarkedGraph] = []
    for graph in enumerate_stable_graphs(genus, legs, True, work_budget):
        orbits: dict[bytes, EdgeSubset] = {}
        for tree in enumerate_spanning_trees(graph):
            key = canon.marked_key(graph, tree)
            if key not in orbits or sorted(tree) < sorted(orbits[key]):
                orbits[key] = tree
        for key in sorted(orbits):
            out.append(MarkedGraph(graph, orbits[key]))
    return out


def glue_tree(tree_graph: StableGraph, genus: int) -> MarkedGraph:
    """Glue markings n+2i-1 and n+2i (i = 1..g) of a genus-0 graph into
    edges; the original edges become the spanning tree."""
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    if tree_graph.genus != 0 or any(tree_graph.genera):
        raise GraphValidationError("gluing input must have genus 0 everywhere")
    n = tree_graph.n_legs - 2 * genus
    if n < 0:
        raise GraphValidationError(
            f"need at least {2 * genus} legs to glue, found {tree_graph.n_legs}"
        )
    at_label = {lab: v for v, lab in tree_graph.legs}
    new_edges = list(tree_graph.edges)
    for i in range(1, genus + 1):
        new_edges.append((at_label[n + 2 * i - 1], at_label[n + 2 * i]))
    kept = [(v, lab) for v, lab in tree_graph.legs if lab <= n]
    glued = StableGraph(tree_graph.genera, new_edges, kept)
    return MarkedGraph(glued, frozenset(range(tree_graph.n_edges)))


def fiber_census(
    genus: int, legs: int, work_budget: int = DEFAULT_WORK_BUDGET
) -> dict[MarkedGraph, int]:
    """Bucket the glued images of all genus-0 graphs with 2g+n legs by
    iso class of the marked pair."""
    counts: dict[MarkedGraph, int] = {}
    for tree_graph in iter_stable_graphs(0, 2 * genus + legs, True, work_budget):
        marked = glue_tree(tree_graph, genus)
        graph, tree = canon.canonical_marked_form(marked.graph, marked.tree)
        rep = MarkedGraph(graph, tree)
        counts[rep] = counts.get(rep, 0) + 1
    return counts


def expected_fiber_size(marked: MarkedGraph, genus: int) -> int:
    """The closed-form fiber count 2^g g! / |Aut(graph, tree)|."""
    order = aut_order_marked(marked.graph, marked.tree)
    total = 2**genus * factorial(genus)
    if total % order:
        raise ArithmeticError(
            f"|Aut(graph, tree)| = {order} does not divide {total}"
        )
    return total // order
