"""Labeled map-decomposition certificates for generic minimal rigidity.

A certificate puts every copy e^k_{t,l} of the expanded multi-hypergraph into
one of d-1 maps, gives it a tail vertex, and ties each map to a column group
of the rigidity matrix.  It is valid when

* every map is a map-graph (each vertex is the tail of exactly one copy);
* a copy of edge k sitting in column group j >= s_k carries t = j - s_k + 1
  (otherwise its row is zero in that group);
* copies of one edge sharing l never share a map;
* copies of one edge sharing t never share a tail.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .hypergraph import (
    WeightedHypergraph,
    count_check,
    expand,
    overpinned_screen,
    require_valid,
)
from .mapdecomp import MapDecomposition, is_map_decomposition


@dataclass(frozen=True)
class Certificate:
    decomposition: MapDecomposition
    labels: tuple[tuple[int, int], ...]  # (t, l) per copy
    map_group: tuple[int, ...]  # map_group[j - 1] = column group of map j

    def group_of(self, c: int) -> int:
        return self.map_group[self.decomposition.map_of[c] - 1]


class Status(str, enum.Enum):
    MINIMALLY_RIGID = "MinimallyRigid"
    NOT_TIGHT = "NotTight"
    NO_CERTIFICATE = "NoCertificate"
    SCREEN_FAILED = "ScreenFailed"


@dataclass
class RigidityVerdict:
    status: Status
    certificate: Certificate | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def rigid(self) -> bool:
        return self.status is Status.MINIMALLY_RIGID


def compatible(j: int, t: int, s: int) -> bool:
    """Row r_{t,*} of an edge of size s is non-zero in column group j."""
    return j <= s - 1 or j == s - 1 + t


def check_certificate(h: WeightedHypergraph, cert: Certificate) -> bool:
    mh = expand(h)
    k = h.d - 1
    dec = cert.decomposition
    if len(cert.labels) != len(mh) or len(dec.map_of) != len(mh) or len(dec.tail) != len(mh):
        raise ValueError("certificate does not index this hypergraph's expansion")
    if h.total_rows() != h.capacity():
        return False
    if sorted(cert.map_group) != list(range(1, k + 1)):
        return False
    if not is_map_decomposition(mh, dec, k):
        return False
    per_edge: dict[int, list[tuple[int, int]]] = {}
    for c, copy in enumerate(mh.copies):
        per_edge.setdefault(copy.edge, []).append(cert.labels[c])
    for e, labels in per_edge.items():
        edge = h.edges[e]
        expected = {(t, l) for t in range(1, h.d - edge.size + 1) for l in range(1, edge.pin_dim + 1)}
        if len(labels) != len(expected) or set(labels) != expected:
            return False
    seen_l: set[tuple[int, int, int]] = set()
    seen_t: set[tuple[int, int, int]] = set()
    for c, copy in enumerate(mh.copies):
        t, l = cert.labels[c]
        s = h.edges[copy.edge].size
        j = cert.group_of(c)
        if not compatible(j, t, s):
            return False
        key_l = (copy.edge, dec.map_of[c], l)
        key_t = (copy.edge, t, dec.tail[c])
        if key_l in seen_l or key_t in seen_t:
            return False
        seen_l.add(key_l)
        seen_t.add(key_t)
    return True


class _Search:
    """Exact cover of (vertex, column group) slots by edge labels (k, t, l)."""

    def __init__(self, h: WeightedHypergraph, budget: int):
        self.h = h
        self.k = h.d - 1
        self.budget = budget
        self.nodes = 0
        self.exhausted_budget = False
        # candidate labels per slot, static part
        self.labels = [
            (e, t, l)
            for e, edge in enumerate(h.edges)
            for t in range(1, h.d - edge.size + 1)
            for l in range(1, edge.pin_dim + 1)
        ]
        self.slots = [(v, j) for j in range(self.k, 0, -1) for v in range(h.n)]
        members = [set(h.edge_indices(e)) for e in range(len(h.edges))]
        self.cands = {
            (v, j): [
                i for i, (e, t, l) in enumerate(self.labels)
                if v in members[e] and compatible(j, t, h.edges[e].size)
            ]
            for (v, j) in self.slots
        }
        self.label_used = [False] * len(self.labels)
        self.used_jl: set[tuple[int, int, int]] = set()
        self.used_tv: set[tuple[int, int, int]] = set()
        self.assign: dict[tuple[int, int], int] = {}

    def _ok(self, i: int, v: int, j: int) -> bool:
        e, t, l = self.labels[i]
        return (not self.label_used[i] and (e, j, l) not in self.used_jl
                and (e, t, v) not in self.used_tv)

    def _options(self, slot) -> list[int]:
        v, j = slot
        return [i for i in self.cands[slot] if self._ok(i, v, j)]

    def run(self) -> bool:
        if len(self.labels) != len(self.slots):
            return False
        return self._rec()

    def _rec(self) -> bool:
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted_budget = True
            return False
        open_slots = [s for s in self.slots if s not in self.assign]
        if not open_slots:
            return True
        best, best_opts = None, None
        for s in open_slots:
            opts = self._options(s)
            if not opts:
                return False
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = s, opts
                if len(opts) == 1:
                    break
        # every unused label still needs some slot
        free_labels = {i for s in open_slots for i in self._options(s)}
        if len(free_labels) < len(open_slots):
            return False
        v, j = best
        for i in best_opts:
            e, t, l = self.labels[i]
            self.label_used[i] = True
            self.used_jl.add((e, j, l))
            self.used_tv.add((e, t, v))
            self.assign[best] = i
            if self._rec():
                return True
            del self.assign[best]
            self.used_tv.discard((e, t, v))
            self.used_jl.discard((e, j, l))
            self.label_used[i] = False
            if self.exhausted_budget:
                return False
        return False

    def certificate(self) -> Certificate:
        mh = expand(self.h)
        index = {(c.edge, c.t, c.l): i for i, c in enumerate(mh.copies)}
        map_of = [0] * len(mh)
        tail = [0] * len(mh)
        labels: list[tuple[int, int]] = [(0, 0)] * len(mh)
        for (v, j), i in self.assign.items():
            e, t, l = self.labels[i]
            c = index[(e, t, l)]
            map_of[c], tail[c], labels[c] = j, v, (t, l)
        return Certificate(MapDecomposition(tuple(map_of), tuple(tail)), tuple(labels),
                           tuple(range(1, self.k + 1)))


def search_certificate(h: WeightedHypergraph, budget: int = 10**6) -> tuple[Certificate | None, dict]:
    """Backtracking search; returns (certificate or None, search statistics)."""
    s = _Search(h, budget)
    found = s.run()
    stats = {"nodes": s.nodes, "exhaustive": not s.exhausted_budget}
    return (s.certificate() if found else None), stats


def find_certificate(h: WeightedHypergraph, budget: int = 10**6) -> RigidityVerdict:
    require_valid(h)
    counts = count_check(h)
    diag: dict = {
        "total": counts.total,
        "capacity": counts.capacity,
        "sparse": counts.sparse,
        "violating_subgraphs": [list(v) for v in counts.violating_subgraphs],
    }
    if not counts.tight:
        return RigidityVerdict(Status.NOT_TIGHT, None, diag)
    flagged = overpinned_screen(h)
    diag["overpinned"] = [list(v) for v in flagged]
    cert, stats = search_certificate(h, budget)
    diag.update(stats)
    diag["certificate_found"] = cert is not None
    if flagged:
        return RigidityVerdict(Status.SCREEN_FAILED, cert, diag)
    if cert is None:
        return RigidityVerdict(Status.NO_CERTIFICATE, None, diag)
    return RigidityVerdict(Status.MINIMALLY_RIGID, cert, diag)


def certificate_rows(h: WeightedHypergraph, cert: Certificate) -> list[list[int]]:
    """Row indices (copy order == row order) of each column group's block."""
    groups: list[list[int]] = [[] for _ in range(h.d - 1)]
    for c in range(len(cert.labels)):
        groups[cert.group_of(c) - 1].append(c)
    return groups


def brute_force_certificate(h: WeightedHypergraph, limit: int = 10**6) -> Certificate | None:
    """Oracle: every decomposition (maps == column groups), then every labeling.

    Given the decomposition, the labeling conditions only relate copies of
    the same edge, so each edge's label permutations are tried on their own.
    """
    from itertools import permutations

    from .mapdecomp import enumerate_decompositions

    mh = expand(h)
    k = h.d - 1
    by_edge: dict[int, list[int]] = {}
    for c, copy in enumerate(mh.copies):
        by_edge.setdefault(copy.edge, []).append(c)

    def edge_labeling(dec, e, cs):
        s = h.edges[e].size
        for perm in permutations([(mh.copies[c].t, mh.copies[c].l) for c in cs]):
            by_l = {(dec.map_of[c], l) for c, (t, l) in zip(cs, perm)}
            by_t = {(t, dec.tail[c]) for c, (t, l) in zip(cs, perm)}
            if (len(by_l) == len(cs) and len(by_t) == len(cs)
                    and all(compatible(dec.map_of[c], t, s) for c, (t, _) in zip(cs, perm))):
                return perm
        return None

    for dec in enumerate_decompositions(mh, k, limit):
        labels: list = [None] * len(mh)
        for e, cs in by_edge.items():
            perm = edge_labeling(dec, e, cs)
            if perm is None:
                break
            for c, lab in zip(cs, perm):
                labels[c] = lab
        else:
            cert = Certificate(dec, tuple(labels), tuple(range(1, k + 1)))
            if check_certificate(h, cert):
                return cert
    return None


def slot_table(h: WeightedHypergraph, cert: Certificate) -> Sequence[Sequence[str]]:
    """Human-readable grid: one row per column group, one entry per vertex."""
    mh = expand(h)
    grid = [["" for _ in range(h.n)] for _ in range(h.d - 1)]
    for c, copy in enumerate(mh.copies):
        t, l = cert.labels[c]
        grid[cert.group_of(c) - 1][cert.decomposition.tail[c]] = f"e{copy.edge + 1}_{t},{l}"
    return grid
