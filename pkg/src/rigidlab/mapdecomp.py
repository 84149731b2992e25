"""(k,0) pebble game on multi-hypergraphs and decompositions into k map-graphs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Iterator, Sequence

from .hypergraph import MultiHypergraph


class PebbleGame:
    """Incremental (k,0)-pebble game.

    Each vertex starts with k pebbles.  Inserting a hyperedge copy consumes one
    pebble from one of its vertices, which becomes the copy's tail.  When no
    vertex of the copy holds a free pebble, a depth-first search along copies
    tailed at the vertex (lowest vertex index first) moves a pebble back by
    reversing the tails on the search path.
    """

    def __init__(self, n: int, k: int):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.n = n
        self.k = k
        self.pebbles = [k] * n
        self.out: list[list[int]] = [[] for _ in range(n)]
        self.tail: dict[int, int] = {}
        self.members: dict[int, tuple[int, ...]] = {}
        self.last_reach: set[int] = set()

    def clone(self) -> "PebbleGame":
        g = PebbleGame.__new__(PebbleGame)
        g.n, g.k = self.n, self.k
        g.pebbles = list(self.pebbles)
        g.out = [list(o) for o in self.out]
        g.tail = dict(self.tail)
        g.members = dict(self.members)
        g.last_reach = set()
        return g

    def _bring_pebble(self, u: int, visited: set[int]) -> bool:
        for c in list(self.out[u]):
            for w in self.members[c]:
                if w in visited:
                    continue
                visited.add(w)
                if self.pebbles[w] > 0 or self._bring_pebble(w, visited):
                    self.pebbles[w] -= 1
                    self.out[u].remove(c)
                    self.out[w].append(c)
                    self.tail[c] = w
                    self.pebbles[u] += 1
                    return True
        return False

    def insert(self, copy_id: int, vertices: Sequence[int]) -> bool:
        verts = sorted(set(vertices))
        target = next((v for v in verts if self.pebbles[v] > 0), None)
        if target is None:
            visited = set(verts)
            for v in verts:
                if self._bring_pebble(v, visited):
                    target = v
                    break
            if target is None:
                self.last_reach = visited
                return False
        self.pebbles[target] -= 1
        self.out[target].append(copy_id)
        self.tail[copy_id] = target
        self.members[copy_id] = tuple(verts)
        return True

    def free_pebbles(self) -> int:
        return sum(self.pebbles)


@dataclass(frozen=True)
class PebbleResult:
    accepted: bool
    tight: bool
    orientation: tuple[int | None, ...]  # tail vertex index per copy
    blocked: int | None
    reach: frozenset[int]


def pebble_game(mh: MultiHypergraph, k: int, order: Sequence[int] | None = None) -> PebbleResult:
    """Run the (k,0) game inserting copies in ``order`` (default: index order).

    Stops at the first copy that cannot be inserted; ``reach`` is then a vertex
    set whose induced copies exceed k|V'|.
    """
    g = PebbleGame(mh.base.n, k)
    order = range(len(mh)) if order is None else order
    for c in order:
        if not g.insert(c, mh.vertex_set(c)):
            tails = tuple(g.tail.get(i) for i in range(len(mh)))
            return PebbleResult(False, False, tails, c, frozenset(g.last_reach))
    tails = tuple(g.tail[i] for i in range(len(mh)))
    return PebbleResult(True, g.free_pebbles() == 0, tails, None, frozenset())


@dataclass(frozen=True)
class MapDecomposition:
    """Map index (1..k) and tail vertex index per copy."""

    map_of: tuple[int, ...]
    tail: tuple[int, ...]

    def maps(self, k: int) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(k)]
        for c, j in enumerate(self.map_of):
            out[j - 1].append(c)
        return out


class OrientationError(ValueError):
    pass


def split_into_maps(mh: MultiHypergraph, tails: Sequence[int], k: int) -> MapDecomposition:
    """Give each vertex's k out-copies the maps 1..k in copy-index order."""
    n = mh.base.n
    out: list[list[int]] = [[] for _ in range(n)]
    for c, v in enumerate(tails):
        if v not in mh.vertex_set(c):
            raise OrientationError(f"copy {c}: tail {v} is not in its edge")
        out[v].append(c)
    if any(len(o) != k for o in out):
        raise OrientationError("orientation is not k-regular in out-degree")
    map_of = [0] * len(mh)
    for v in range(n):
        for j, c in enumerate(sorted(out[v]), start=1):
            map_of[c] = j
    return MapDecomposition(tuple(map_of), tuple(tails))


def is_map_decomposition(mh: MultiHypergraph, dec: MapDecomposition, k: int) -> bool:
    n = mh.base.n
    if len(dec.map_of) != len(mh) or len(dec.tail) != len(mh):
        return False
    seen = set()
    for c in range(len(mh)):
        j, v = dec.map_of[c], dec.tail[c]
        if not 1 <= j <= k or v not in mh.vertex_set(c) or (v, j) in seen:
            return False
        seen.add((v, j))
    return len(seen) == n * k


def _has_matching(copies: Sequence[int], mh: MultiHypergraph, slot_free: dict[int, int]) -> bool:
    """Can the copies be given distinct tail slots (vertex capacities in slot_free)?"""
    cap = dict(slot_free)
    owner: dict[int, list[int]] = {v: [] for v in cap}

    def augment(c: int, seen: set[int]) -> bool:
        for v in mh.vertex_set(c):
            if v in seen or v not in cap:
                continue
            seen.add(v)
            if cap[v] > 0:
                cap[v] -= 1
                owner[v].append(c)
                return True
            for other in list(owner[v]):
                if augment(other, seen):
                    owner[v].remove(other)
                    owner[v].append(c)
                    return True
        return False

    return all(augment(c, set()) for c in copies)


def enumerate_decompositions(mh: MultiHypergraph, k: int, limit: int = 10**6) -> Iterator[MapDecomposition]:
    """Every assignment of copies to (tail, map) slots covering each slot once.

    Backtracks over copies in index order; a Hall-type matching check on the
    remaining copies prunes dead branches.  Yields nothing unless the
    multi-hypergraph is (k,0)-tight.
    """
    n, m = mh.base.n, len(mh)
    if m != k * n:
        return
    used = [[False] * (k + 1) for _ in range(n)]
    remaining = [k] * n
    map_of = [0] * m
    tail = [0] * m

    def rec(c: int) -> Iterator[MapDecomposition]:
        if c == m:
            yield MapDecomposition(tuple(map_of), tuple(tail))
            return
        for v in mh.vertex_set(c):
            if remaining[v] == 0:
                continue
            remaining[v] -= 1
            if _has_matching(range(c + 1, m), mh, {u: remaining[u] for u in range(n)}):
                for j in range(1, k + 1):
                    if used[v][j]:
                        continue
                    used[v][j] = True
                    map_of[c], tail[c] = j, v
                    yield from rec(c + 1)
                    used[v][j] = False
            remaining[v] += 1

    yield from islice(rec(0), limit)
