"""Weighted hypergraphs, counting conditions and the multi-hypergraph expansion."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class InvalidHypergraph(ValueError):
    pass


@dataclass(frozen=True)
class HyperEdge:
    vertices: tuple[str, ...]
    pin_dim: int = 1

    def __init__(self, vertices: Iterable[str], pin_dim: int = 1):
        object.__setattr__(self, "vertices", tuple(str(v) for v in vertices))
        object.__setattr__(self, "pin_dim", int(pin_dim))

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class WeightedHypergraph:
    """Hypergraph in ambient dimension ``d`` whose edges carry pin dimensions.

    Vertex ids are opaque strings; their position in ``vertices`` is the
    internal index used for matrix columns.
    """

    d: int
    vertices: tuple[str, ...]
    edges: tuple[HyperEdge, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __init__(self, d: int, vertices: Iterable[str], edges: Iterable[HyperEdge]):
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "vertices", tuple(str(v) for v in vertices))
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    @classmethod
    def build(cls, d: int, edges: Sequence[tuple[Iterable[str], int]], vertices=None):
        """Convenience constructor; vertices default to order of first appearance."""
        edge_objs = [HyperEdge(vs, m) for vs, m in edges]
        if vertices is None:
            seen: dict[str, None] = {}
            for e in edge_objs:
                for v in e.vertices:
                    seen.setdefault(v, None)
            vertices = list(seen)
        return cls(d, vertices, edge_objs)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        return self._index[v]

    def edge_indices(self, k: int) -> tuple[int, ...]:
        return tuple(self._index[v] for v in self.edges[k].vertices)

    def rank(self) -> int:
        return max((e.size for e in self.edges), default=0)

    def edge_rows(self, k: int) -> int:
        e = self.edges[k]
        return e.pin_dim * (self.d - e.size)

    def total_rows(self) -> int:
        return sum(self.edge_rows(k) for k in range(len(self.edges)))

    def capacity(self) -> int:
        return (self.d - 1) * self.n

    def relabel(self, vertex_map: dict[str, str] | None = None, edge_order=None,
                vertex_order=None) -> "WeightedHypergraph":
        vertex_map = vertex_map or {}
        edges = [self.edges[k] for k in (edge_order if edge_order is not None else range(len(self.edges)))]
        new_edges = [HyperEdge([vertex_map.get(v, v) for v in e.vertices], e.pin_dim) for e in edges]
        verts = [vertex_map.get(v, v) for v in self.vertices]
        if vertex_order is not None:
            verts = [verts[i] for i in vertex_order]
        return WeightedHypergraph(self.d, verts, new_edges)


@dataclass(frozen=True)
class Violation:
    kind: str
    edge: int | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def validate(h: WeightedHypergraph) -> ValidationReport:
    out: list[Violation] = []
    if h.d < 2:
        out.append(Violation("dimension", None, f"d = {h.d} < 2"))
    if len(set(h.vertices)) != len(h.vertices):
        out.append(Violation("duplicate-vertex-id", None, "vertex ids are not unique"))
    known = set(h.vertices)
    for k, e in enumerate(h.edges):
        if not e.vertices:
            out.append(Violation("empty-edge", k, f"edge {k} has no vertices"))
        if len(set(e.vertices)) != len(e.vertices):
            out.append(Violation("duplicate-in-edge", k, f"edge {k} repeats a vertex"))
        missing = [v for v in e.vertices if v not in known]
        if missing:
            out.append(Violation("unknown-vertex", k, f"edge {k} uses unknown vertices {missing}"))
        if e.size >= h.d:
            out.append(Violation("rank", k, f"edge {k}: rank >= d ({e.size} >= {h.d})"))
        if e.pin_dim < 1:
            out.append(Violation("pin-dim", k, f"edge {k}: m_k = {e.pin_dim} < 1"))
        elif e.pin_dim > e.size:
            out.append(Violation("overpinned-edge", k,
                                 f"edge {k}: m_k > s_k ({e.pin_dim} > {e.size})"))
    return ValidationReport(tuple(out))


def require_valid(h: WeightedHypergraph) -> None:
    report = validate(h)
    if not report.ok:
        raise InvalidHypergraph("; ".join(v.message for v in report.violations))


def induced_edges(h: WeightedHypergraph, subset: Iterable[int]) -> list[int]:
    """Edges fully contained in the vertex subset (given by internal indices)."""
    s = set(subset)
    return [k for k in range(len(h.edges)) if set(h.edge_indices(k)) <= s]


@dataclass(frozen=True)
class CountReport:
    total: int
    capacity: int
    tight: bool
    sparse: bool
    violating_subgraphs: tuple[tuple[str, ...], ...]
    method: str


def count_check(h: WeightedHypergraph, brute_force_limit: int = 12) -> CountReport:
    """Sum of m_k (d - s_k) against (d-1)|V|, globally and on every induced subgraph."""
    require_valid(h)
    total, capacity = h.total_rows(), h.capacity()
    k = h.d - 1
    if h.n <= brute_force_limit:
        bad = []
        weights = [h.edge_rows(e) for e in range(len(h.edges))]
        masks = [sum(1 << i for i in h.edge_indices(e)) for e in range(len(h.edges))]
        for mask in range(1, 1 << h.n):
            load = sum(w for w, em in zip(weights, masks) if em & mask == em)
            if load > k * bin(mask).count("1"):
                bad.append(tuple(h.vertices[i] for i in range(h.n) if mask >> i & 1))
        sparse = not bad
        method = "brute-force"
    else:
        from .mapdecomp import pebble_game

        res = pebble_game(expand(h), k)
        sparse = res.accepted
        bad = [] if sparse else [tuple(h.vertices[i] for i in sorted(res.reach))]
        method = "pebble-game"
    return CountReport(total, capacity, sparse and total == capacity, sparse, tuple(bad), method)


def overpinned_screen(h: WeightedHypergraph) -> list[tuple[str, ...]]:
    """All vertex sets V' with |V'| < d whose contained pins have sum m_k > |V'|."""
    require_valid(h)
    flagged = []
    for size in range(1, min(h.d - 1, h.n) + 1):
        for subset in combinations(range(h.n), size):
            pins = sum(h.edges[k].pin_dim for k in induced_edges(h, subset))
            if pins > size:
                flagged.append(tuple(h.vertices[i] for i in subset))
    return flagged


@dataclass(frozen=True)
class Copy:
    """Copy e^k_{t,l} of hyperedge k; t in 1..d-s_k, l in 1..m_k."""

    edge: int
    t: int
    l: int


@dataclass(frozen=True)
class MultiHypergraph:
    base: WeightedHypergraph
    copies: tuple[Copy, ...]

    def vertex_set(self, c: int) -> tuple[int, ...]:
        return self.base.edge_indices(self.copies[c].edge)

    def __len__(self) -> int:
        return len(self.copies)


def expand(h: WeightedHypergraph) -> MultiHypergraph:
    """Copies in lexicographic (k, t, l) order; copy index == rigidity-matrix row index."""
    copies = []
    for k, e in enumerate(h.edges):
        for t in range(1, h.d - e.size + 1):
            for l in range(1, e.pin_dim + 1):
                copies.append(Copy(k, t, l))
    return MultiHypergraph(h, tuple(copies))
