"""Laplace expansion of det(M) along column groups, and the pure condition.

For a square rigidity matrix, det(M) is the sum over ordered row partitions
(R_1, ..., R_{d-1}) with |R_j| = |V| of sign * prod_j det M[R_j, C_j].  Only
partitions whose blocks are map-graphs can contribute; restricting the sum to
them and factoring the common D^k_{t,j} out of each block row gives the pure
condition evaluated at the framework.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .fields import Field, get_field
from .framework import Framework, column_set, sample_generic
from .hypergraph import WeightedHypergraph, require_valid
from .mapdecomp import MapDecomposition
from .rigidmatrix import RigidityMatrix, assemble, edge_determinants, trial_seed


def ordered_partitions(n_rows: int, groups: int, size: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    def rec(rest: tuple[int, ...], left: int):
        if left == 1:
            yield (rest,)
            return
        for block in combinations(rest, size):
            chosen = set(block)
            remaining = tuple(r for r in rest if r not in chosen)
            for tail in rec(remaining, left - 1):
                yield (block,) + tail

    if n_rows != groups * size:
        return
    yield from rec(tuple(range(n_rows)), groups)


def partition_sign(blocks: Sequence[Sequence[int]]) -> int:
    """Sign of the row permutation listing R_1, R_2, ... in order."""
    perm = [r for b in blocks for r in b]
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def _signed(f: Field, sign: int, x):
    return x if sign > 0 else f.neg(x)


def _is_map_graph(m: RigidityMatrix, rows: Sequence[int]) -> bool:
    """Do the block's copies admit tails forming a bijection onto the vertices?"""
    support = [m.row_info[r].members for r in rows]
    match: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for v in support[i]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match or augment(match[v], seen):
                match[v] = i
                return True
        return False

    return all(augment(i, set()) for i in range(len(rows)))


def is_map_partition(m: RigidityMatrix, blocks: Sequence[Sequence[int]]) -> bool:
    return all(len(b) == m.n and _is_map_graph(m, b) for b in blocks)


@dataclass(frozen=True)
class LaplaceResult:
    lhs: object
    rhs: object
    equal: bool
    partitions: int
    map_partitions: int
    nonmap_terms_zero: bool
    map_rhs: object


class RowLimitExceeded(ValueError):
    pass


def laplace_verify(m: RigidityMatrix, limit_rows: int = 10) -> LaplaceResult:
    """det(M) by elimination against the full partition sum (and its map-graph part)."""
    f = m.field
    n_rows, n_cols = m.shape
    if n_rows != n_cols:
        raise ValueError(f"rigidity matrix is not square ({n_rows}x{n_cols})")
    if n_rows > limit_rows:
        raise RowLimitExceeded(f"{n_rows} rows exceed the Laplace limit of {limit_rows}")
    lhs = m.det()
    total, map_total = f.zero, f.zero
    count = map_count = 0
    nonmap_zero = True
    for blocks in ordered_partitions(n_rows, m.groups, m.n):
        count += 1
        term = f.one
        for j, b in enumerate(blocks, start=1):
            term = f.mul(term, f.det(m.block(b, j)))
            if f.is_zero(term):
                break
        term = _signed(f, partition_sign(blocks), term)
        total = f.add(total, term)
        if is_map_partition(m, blocks):
            map_count += 1
            map_total = f.add(map_total, term)
        elif not f.is_zero(term):
            nonmap_zero = False
    return LaplaceResult(lhs, total, f.sub(lhs, total) == f.zero, count, map_count,
                         nonmap_zero, map_total)


def factored_block(fw: Framework, m: RigidityMatrix, rows: Sequence[int], j: int):
    """(prod of D^k_{t,j} over the block rows, det M'[R_j, C_j] with b-pattern rows)."""
    f = fw.field
    coeffs = fw.coefficients()
    dets = {}
    scale = f.one
    sub = []
    for r in rows:
        info = m.row_info[r]
        if info.edge not in dets:
            dets[info.edge] = edge_determinants(fw, info.edge)
        scale = f.mul(scale, dets[info.edge][(info.t, j)])
        row = [f.zero] * m.n
        if j - 1 in column_set(info.size, info.t):
            b = coeffs[info.edge][info.l - 1]
            for i, v in enumerate(info.members):
                row[v] = b[i]
        sub.append(row)
    return scale, f.det(sub)


def decomposition_blocks(dec: MapDecomposition, groups: int) -> tuple[tuple[int, ...], ...]:
    """Row partition of a decomposition whose map j is paired with column group j."""
    return tuple(tuple(sorted(rows)) for rows in dec.maps(groups))


def map_partition_sum(fw: Framework, decomps: Iterable[MapDecomposition]) -> tuple[object, int]:
    """Sum over the distinct row partitions induced by ``decomps``; returns (value, #terms)."""
    f = fw.field
    m = assemble(fw)
    seen: set = set()
    total = f.zero
    for dec in decomps:
        blocks = decomposition_blocks(dec, m.groups)
        if blocks in seen:
            continue
        seen.add(blocks)
        term = f.one
        for j, b in enumerate(blocks, start=1):
            scale, det_prime = factored_block(fw, m, b, j)
            term = f.mul(term, f.mul(scale, det_prime))
        total = f.add(total, _signed(f, partition_sign(blocks), term))
    return total, len(seen)


@dataclass(frozen=True)
class ProbeResult:
    always_zero: bool
    values: tuple[str, ...]
    witnesses: tuple[int, ...]  # sample indices with det(M) != 0
    samples: int
    failure_bound: float


def vanishing_probe(h: WeightedHypergraph, samples: int = 5, seed: int = 0,
                    field: Field | str = "prime") -> ProbeResult:
    """Evaluate det(M) at independent random frameworks.

    If det(M) is not the zero polynomial, a single sample misses it with
    probability at most deg / |sample set|; ``failure_bound`` is that bound
    raised to the number of samples.
    """
    require_valid(h)
    f = get_field(field)
    if not f.exact:
        raise ValueError("vanishing probe needs an exact field")
    if h.total_rows() != h.capacity():
        raise ValueError("pure-condition probe needs a square rigidity matrix")
    values, witnesses = [], []
    for i in range(samples):
        fw = sample_generic(h, trial_seed(seed, i), f)
        det = assemble(fw).det()
        values.append(f.format(det))
        if not f.is_zero(det):
            witnesses.append(i)
    degree = h.total_rows() * (h.d - 1)
    bound = (degree / f.sample_set_size()) ** samples
    return ProbeResult(not witnesses, tuple(values), tuple(witnesses), samples, bound)


def det_at(fw: Framework):
    return assemble(fw).det()


__all__ = [
    "LaplaceResult",
    "ProbeResult",
    "RowLimitExceeded",
    "det_at",
    "factored_block",
    "is_map_partition",
    "laplace_verify",
    "map_partition_sum",
    "ordered_partitions",
    "partition_sign",
    "vanishing_probe",
]
