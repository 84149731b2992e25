"""Random weighted hypergraphs: tight instances grown with the pebble game, and free samples."""

from __future__ import annotations

import random
from itertools import combinations

from .hypergraph import HyperEdge, WeightedHypergraph, overpinned_screen
from .mapdecomp import PebbleGame


class GenerationError(RuntimeError):
    pass


def vertex_names(n: int) -> list[str]:
    return [f"v{i + 1}" for i in range(n)]


def random_edge(rng: random.Random, d: int, n: int, max_weight: int | None = None,
                max_pin: int | None = None) -> tuple[tuple[int, ...], int] | None:
    options = []
    for s in range(1, min(d - 1, n) + 1):
        for m in range(1, min(s, max_pin or s) + 1):
            if max_weight is None or m * (d - s) <= max_weight:
                options.append((s, m))
    if not options:
        return None
    s, m = rng.choice(options)
    return tuple(sorted(rng.sample(range(n), s))), m


def random_tight(d: int, nv: int, seed: int = 0, attempts: int = 200,
                 stall: int = 60, screened: bool = False) -> WeightedHypergraph:
    """Add random edges while the pebble game accepts all their copies, until tight.

    With ``screened`` an edge is also rejected when it would create an
    overpinned vertex set.
    """
    if d < 2 or nv < 1:
        raise GenerationError("need d >= 2 and at least one vertex")
    rng = random.Random(seed)
    capacity = (d - 1) * nv
    names = vertex_names(nv)
    for _ in range(attempts):
        game = PebbleGame(nv, d - 1)
        edges: list[HyperEdge] = []
        total = 0
        copy_id = 0
        misses = 0
        while total < capacity and misses < stall:
            choice = random_edge(rng, d, nv, capacity - total)
            if choice is None:
                break
            verts, m = choice
            weight = m * (d - len(verts))
            edge = HyperEdge([names[v] for v in verts], m)
            if screened and overpinned_screen(WeightedHypergraph(d, names, edges + [edge])):
                misses += 1
                continue
            trial = game.clone()
            if all(trial.insert(copy_id + i, verts) for i in range(weight)):
                game = trial
                copy_id += weight
                total += weight
                edges.append(edge)
                misses = 0
            else:
                misses += 1
        if total == capacity:
            return WeightedHypergraph(d, names, edges)
    raise GenerationError(f"no tight instance for d={d}, nv={nv} after {attempts} attempts")


def random_hypergraph(rng: random.Random, d: int, n: int, n_edges: int,
                      max_pin: int | None = None) -> WeightedHypergraph:
    names = vertex_names(n)
    edges = []
    for _ in range(n_edges):
        verts, m = random_edge(rng, d, n, None, max_pin)
        edges.append(HyperEdge([names[v] for v in verts], m))
    return WeightedHypergraph(d, names, edges)


def edge_types(d: int, n: int, max_pin: int | None = None) -> list[tuple[tuple[int, ...], int, int]]:
    """(vertex subset, m, rows) for every admissible edge on n vertices."""
    out = []
    for s in range(1, min(d - 1, n) + 1):
        for subset in combinations(range(n), s):
            for m in range(1, min(s, max_pin or s) + 1):
                out.append((subset, m, m * (d - s)))
    return out


def random_rigid(d: int, nv: int, seed: int = 0, tries: int = 50) -> WeightedHypergraph:
    """A random tight instance that is rigid both combinatorially and by generic rank."""
    from .certificate import find_certificate
    from .rigidmatrix import generic_rank

    rng = random.Random(seed)
    for _ in range(tries):
        try:
            h = random_tight(d, nv, rng.getrandbits(32), attempts=20, screened=True)
        except GenerationError:
            continue
        if find_certificate(h, budget=20000).rigid and generic_rank(h).rigid:
            return h
    raise GenerationError(f"no rigid instance for d={d}, nv={nv} after {tries} tries")


def rigid_suite(count: int, seed: int = 0, dims=(3, 4), extra=(0, 1, 2)) -> list[WeightedHypergraph]:
    """``count`` seeded rigid instances alternating dimensions, with d + extra vertices."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        d = dims[i % len(dims)]
        out.append(random_rigid(d, d + rng.choice(extra), rng.getrandbits(32)))
    return out
