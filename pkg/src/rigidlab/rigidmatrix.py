"""Rigidity matrix assembly, the direct Jacobian and generic rank.

Row order is (k, t, l) lexicographic, the same as ``hypergraph.expand`` and
``framework.evaluate``.  Columns are grouped by coordinate: column
``(j - 1) * n + i`` holds coordinate j of vertex i, so column group C_j is a
contiguous block of n columns.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .fields import Field, RealField, get_field
from .framework import (
    DegenerateSample,
    Framework,
    column_set,
    constraint_matrix,
    evaluate,
    leading_ones_det,
    residual_index,
    sample_generic,
)
from .hypergraph import WeightedHypergraph, require_valid


@dataclass(frozen=True)
class RowInfo:
    edge: int
    t: int
    l: int
    size: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class RigidityMatrix:
    field: Field
    n: int
    groups: int
    rows: tuple[tuple, ...]
    row_info: tuple[RowInfo, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.n * self.groups

    def col(self, vertex: int, j: int) -> int:
        return (j - 1) * self.n + vertex

    def block(self, row_ids, j: int) -> list[list]:
        lo = (j - 1) * self.n
        return [list(self.rows[r][lo : lo + self.n]) for r in row_ids]

    def as_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def rank(self) -> int:
        return self.field.rank(self.as_lists())

    def det(self):
        return self.field.det(self.as_lists())


def edge_determinants(fw: Framework, k: int) -> dict[tuple[int, int], object]:
    """D^k_{t,j} for t in 1..d-s_k and j in 1..d-1 (zero when j is outside C(t))."""
    f = fw.field
    h = fw.h
    s = h.edges[k].size
    pts = fw.edge_points(k)
    out = {}
    for t in range(1, h.d - s + 1):
        cols = column_set(s, t)
        for j in range(1, h.d):
            if j - 1 not in cols:
                out[(t, j)] = f.zero
                continue
            m = [[f.one if c == j - 1 else p[c] for c in cols] for p in pts]
            out[(t, j)] = f.det(m)
    return out


def _row_infos(h: WeightedHypergraph) -> tuple[RowInfo, ...]:
    return tuple(
        RowInfo(k, t, l, h.edges[k].size, h.edge_indices(k)) for k, t, l in residual_index(h)
    )


def assemble(fw: Framework) -> RigidityMatrix:
    """Rows D^k_{t,j} * b^{k,l}_i at (vertex v^k_i, coordinate j)."""
    f = fw.field
    h = fw.h
    n, groups = h.n, h.d - 1
    coeffs = fw.coefficients()
    dets = []
    for k, e in enumerate(h.edges):
        if f.is_zero(leading_ones_det(f, fw.edge_points(k), e.size)):
            raise DegenerateSample(f"D^k vanishes on edge {k}")
        dets.append(edge_determinants(fw, k))
    infos = _row_infos(h)
    rows = []
    for info in infos:
        row = [f.zero] * (n * groups)
        b = coeffs[info.edge][info.l - 1]
        dk = dets[info.edge]
        for i, v in enumerate(info.members):
            for j in range(1, groups + 1):
                row[(j - 1) * n + v] = f.mul(dk[(info.t, j)], b[i])
        rows.append(tuple(row))
    return RigidityMatrix(f, n, groups, tuple(rows), infos)


def _cofactor(f: Field, m: list[list], i: int, c: int):
    minor = [row[:c] + row[c + 1 :] for r, row in enumerate(m) if r != i]
    d = f.det(minor)
    return f.neg(d) if (i + c) % 2 else d


def direct_jacobian(fw: Framework) -> RigidityMatrix:
    """Partial derivatives of det(E^k_l[., C(t)]) in the vertex coordinates, by cofactors."""
    f = fw.field
    h = fw.h
    n, groups = h.n, h.d - 1
    infos = _row_infos(h)
    rows = []
    for info in infos:
        row = [f.zero] * (n * groups)
        cols = column_set(info.size, info.t)
        e = constraint_matrix(f, fw.edge_points(info.edge), fw.pins[info.edge][info.l - 1],
                              info.size, info.t)
        for i, v in enumerate(info.members):
            for c, coord in enumerate(cols):
                row[coord * n + v] = _cofactor(f, e, i, c)
        rows.append(tuple(row))
    return RigidityMatrix(f, n, groups, tuple(rows), infos)


def fd_jacobian(fw: Framework, step: float = 1e-6) -> np.ndarray:
    """Central finite differences of the residual vector (float mode)."""
    fw = fw if isinstance(fw.field, RealField) else fw.as_field("float")
    h = fw.h
    n, groups = h.n, h.d - 1
    base = np.array(fw.coords, dtype=float)
    jac = np.zeros((h.total_rows(), n * groups))
    for v in range(n):
        for j in range(groups):
            plus, minus = base.copy(), base.copy()
            plus[v, j] += step
            minus[v, j] -= step
            rp = np.array(evaluate(fw.with_coords(plus.tolist())), dtype=float)
            rm = np.array(evaluate(fw.with_coords(minus.tolist())), dtype=float)
            jac[:, j * n + v] = (rp - rm) / (2 * step)
    return jac


def row_multipliers(simplified: RigidityMatrix, direct: RigidityMatrix) -> list:
    """Scalar lambda_r with simplified_r == lambda_r * direct_r, or None if not proportional."""
    f = simplified.field
    out = []
    for a, b in zip(simplified.rows, direct.rows):
        lam = None
        ok = True
        for x, y in zip(a, b):
            if f.is_zero(y):
                if not f.is_zero(x):
                    ok = False
                    break
                continue
            q = f.div(x, y)
            if lam is None:
                lam = q
            elif q != lam:
                ok = False
                break
        out.append(lam if ok else None)
    return out


def row_pattern_check(m: RigidityMatrix) -> bool:
    """Zero pattern of the column groups: rows of (k, t, l) vanish in group j >= s_k unless j = s_k-1+t."""
    f = m.field
    for r, info in enumerate(m.row_info):
        row = m.rows[r]
        members = set(info.members)
        for j in range(1, m.groups + 1):
            block = row[(j - 1) * m.n : j * m.n]
            if any(not f.is_zero(x) for v, x in enumerate(block) if v not in members):
                return False
            nonzero = any(not f.is_zero(x) for x in block)
            if j <= info.size - 1:
                if not nonzero:
                    return False
            elif j != info.size - 1 + info.t and nonzero:
                return False
    return True


@dataclass(frozen=True)
class RankReport:
    rank: int
    rows: int
    cols: int
    full_rank: bool
    flex_dim: int
    trials: int
    field: str
    failure_bound: float

    @property
    def square(self) -> bool:
        return self.rows == self.cols

    @property
    def rigid(self) -> bool:
        """Square and of full rank: the numeric counterpart of minimal rigidity."""
        return self.square and self.full_rank


def trial_seed(seed: int, trial: int) -> int:
    return random.Random(f"{seed}/{trial}").getrandbits(64)


def generic_rank(h: WeightedHypergraph, trials: int = 3, field: Field | str = "prime",
                 seed: int = 0) -> RankReport:
    """Largest rank of M over ``trials`` random frameworks.

    By Schwartz-Zippel a single trial underestimates the generic rank with
    probability at most (rank * (d-1)) / |sample set|, entries having degree
    at most d-1 in the sampled values.
    """
    require_valid(h)
    f = get_field(field)
    rows, cols = h.total_rows(), h.capacity()
    best = 0
    target = min(rows, cols)
    for trial in range(trials):
        fw = sample_generic(h, trial_seed(seed, trial), f)
        best = max(best, assemble(fw).rank())
        if best == target:
            break
    bound = target * (h.d - 1) / f.sample_set_size()
    return RankReport(best, rows, cols, best == target, cols - best, trials, f.name, bound)


def d_equality(fw: Framework) -> bool:
    """D^k_{t, s_k-1+t} is the same for every t."""
    f = fw.field
    for k, e in enumerate(fw.h.edges):
        dk = edge_determinants(fw, k)
        vals = [dk[(t, e.size - 1 + t)] for t in range(1, fw.h.d - e.size + 1)]
        if any(f.sub(v, vals[0]) != f.zero for v in vals):
            return False
    return True


__all__ = [
    "DegenerateSample",
    "RankReport",
    "RigidityMatrix",
    "assemble",
    "d_equality",
    "direct_jacobian",
    "edge_determinants",
    "fd_jacobian",
    "generic_rank",
    "row_multipliers",
    "row_pattern_check",
]
