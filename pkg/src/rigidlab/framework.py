"""Concrete frameworks: realizations, pins and the incidence constraints.

Each vertex gets d-1 affine coordinates.  A pin of dimension m_k on edge k
is stored by m_k spanning points x^k_l; sampled frameworks also keep the
barycentric coefficients b^{k,l} with x^k_l = sum_i b^{k,l}_i p^k_i and
sum_i b^{k,l}_i = 1, so incidence holds exactly by construction.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fields import Field, get_field
from .hypergraph import WeightedHypergraph, require_valid

Point = tuple


class DegenerateSample(ArithmeticError):
    pass


def column_set(s: int, t: int) -> list[int]:
    """0-based columns of C(t): the first s-1 coordinates plus coordinate s-1+t."""
    return list(range(s - 1)) + [s - 2 + t]


@dataclass(frozen=True)
class Framework:
    h: WeightedHypergraph
    field: Field
    coords: tuple[Point, ...]  # per vertex, d-1 entries
    pins: tuple[tuple[Point, ...], ...]  # per edge, m_k points
    pin_coeffs: tuple[tuple[Point, ...], ...] | None = None  # per edge, m_k vectors of s_k entries

    def edge_points(self, k: int) -> list[Point]:
        return [self.coords[i] for i in self.h.edge_indices(k)]

    def with_coords(self, coords: Sequence[Sequence]) -> "Framework":
        """Same pins, new realization (pin coefficients are dropped)."""
        return Framework(self.h, self.field, tuple(tuple(p) for p in coords), self.pins, None)

    def coefficients(self) -> tuple[tuple[Point, ...], ...]:
        """Barycentric pin coefficients, solved from the pin points when not stored."""
        if self.pin_coeffs is not None:
            return self.pin_coeffs
        f = self.field
        out = []
        for k, edge in enumerate(self.h.edges):
            pts = self.edge_points(k)
            # unknowns b_1..b_s: sum_i b_i p_i = x, sum_i b_i = 1
            a = [[pts[i][c] for i in range(edge.size)] for c in range(self.h.d - 1)]
            a.append([f.one] * edge.size)
            per_l = []
            for x in self.pins[k]:
                if not f.exact:
                    sol = np.linalg.lstsq(np.array(a, float), np.array(list(x) + [1.0]), rcond=None)[0]
                    per_l.append(tuple(float(v) for v in sol))
                    continue
                b = f.solve(a, list(x) + [f.one])
                if b is None:
                    raise ValueError(f"pin point of edge {k} is not in the span of its vertices")
                per_l.append(tuple(b))
            out.append(tuple(per_l))
        return tuple(out)

    def as_field(self, field: Field | str) -> "Framework":
        f = get_field(field)
        conv = lambda pts: tuple(tuple(f.coerce(x) for x in p) for p in pts)
        coeffs = None
        if self.pin_coeffs is not None:
            coeffs = tuple(conv(per) for per in self.pin_coeffs)
        return Framework(self.h, f, conv(self.coords), tuple(conv(per) for per in self.pins), coeffs)


def leading_ones_det(f: Field, pts: Sequence[Point], s: int):
    """det of [p_i,1 .. p_i,s-1 | 1]: the common D^k of an edge."""
    return f.det([list(p[: s - 1]) + [f.one] for p in pts])


def pin_point(f: Field, pts: Sequence[Point], b: Sequence) -> Point:
    dim = len(pts[0])
    return tuple(f.sum(f.mul(b[i], pts[i][c]) for i in range(len(pts))) for c in range(dim))


def sample_generic(h: WeightedHypergraph, seed: int = 0, field: Field | str = "prime",
                   max_retries: int = 8) -> Framework:
    """Random realization and barycentric pins; deterministic in ``seed``.

    Samples whose per-edge determinant D^k vanishes are rejected and redrawn
    from the same random stream.
    """
    require_valid(h)
    f = get_field(field)
    rng = random.Random(seed)
    for _ in range(max_retries + 1):
        coords = tuple(tuple(f.sample(rng) for _ in range(h.d - 1)) for _ in range(h.n))
        pins, coeffs = [], []
        for k, edge in enumerate(h.edges):
            pts = [coords[i] for i in h.edge_indices(k)]
            per_b, per_x = [], []
            for _l in range(edge.pin_dim):
                free = [f.sample(rng) for _ in range(edge.size - 1)]
                b = tuple(free + [f.sub(f.one, f.sum(free))])
                per_b.append(b)
                per_x.append(pin_point(f, pts, b))
            coeffs.append(tuple(per_b))
            pins.append(tuple(per_x))
        fw = Framework(h, f, coords, tuple(pins), tuple(coeffs))
        if all(not f.is_zero(leading_ones_det(f, fw.edge_points(k), e.size))
               for k, e in enumerate(h.edges)):
            return fw
    raise DegenerateSample(f"no generic sample after {max_retries} retries")


def constraint_matrix(f: Field, pts: Sequence[Point], x: Point, s: int, t: int) -> list[list]:
    """E^k_l restricted to the columns C(t)."""
    cols = column_set(s, t)
    return [[f.sub(p[c], x[c]) for c in cols] for p in pts]


def residual_index(h: WeightedHypergraph) -> list[tuple[int, int, int]]:
    """(k, t, l) per equation, lexicographic; identical to the rigidity-matrix row order."""
    return [
        (k, t, l)
        for k, e in enumerate(h.edges)
        for t in range(1, h.d - e.size + 1)
        for l in range(1, e.pin_dim + 1)
    ]


def evaluate(fw: Framework) -> list:
    f = fw.field
    out = []
    for k, t, l in residual_index(fw.h):
        s = fw.h.edges[k].size
        out.append(f.det(constraint_matrix(f, fw.edge_points(k), fw.pins[k][l - 1], s, t)))
    return out


@dataclass(frozen=True)
class PinnedSystem:
    """Hypergraph plus concrete pin points; the realization is unknown."""

    h: WeightedHypergraph
    field: Field
    pins: tuple[tuple[Point, ...], ...]
    warnings: tuple[str, ...] = ()

    @property
    def n_equations(self) -> int:
        return self.h.total_rows()

    def framework(self, coords: Sequence[Sequence]) -> Framework:
        return Framework(self.h, self.field, tuple(tuple(p) for p in coords), self.pins, None)


def import_pins(h: WeightedHypergraph, pin_points: Sequence[Sequence[Sequence]],
                field: Field | str = "float") -> PinnedSystem:
    require_valid(h)
    f = get_field(field)
    if len(pin_points) != len(h.edges):
        raise ValueError(f"expected pins for {len(h.edges)} edges, got {len(pin_points)}")
    notes = []
    pins = []
    for k, (edge, pts) in enumerate(zip(h.edges, pin_points)):
        if len(pts) != edge.pin_dim:
            raise ValueError(f"edge {k}: expected {edge.pin_dim} pin points, got {len(pts)}")
        conv = []
        for x in pts:
            if len(x) != h.d - 1:
                raise ValueError(f"edge {k}: pin point has {len(x)} coordinates, expected {h.d - 1}")
            conv.append(tuple(f.coerce(c) for c in x))
        # projective independence of the spanning points == rank of [x | 1]
        if f.rank([list(x) + [f.one] for x in conv]) < edge.pin_dim:
            msg = f"edge {k}: pin points are dependent; pin dimension drops below {edge.pin_dim - 1}"
            warnings.warn(msg, stacklevel=2)
            notes.append(msg)
        pins.append(tuple(conv))
    return PinnedSystem(h, f, tuple(pins), tuple(notes))


def export_pins(fw: Framework) -> list[list[list]]:
    return [[list(x) for x in per] for per in fw.pins]
