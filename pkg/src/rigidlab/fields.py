"""Scalar fields and the exact linear algebra used on top of them.

Three fields are supported: rationals (``fractions.Fraction``), the prime
field Z_p with p = 2^61 - 1 by default, and IEEE doubles.  Elements are
plain Python values (Fraction, int in [0, p), float); all arithmetic goes
through the field object so the same assembly code serves every mode.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

MERSENNE_61 = (1 << 61) - 1

Matrix = list[list]


class Field:
    name = "abstract"
    exact = True

    zero: object
    one: object

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and vars(self) == vars(other)

    def __hash__(self) -> int:
        return hash((type(self).__name__, tuple(sorted(vars(self).items()))))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(f'{k}={v!r}' for k, v in vars(self).items())})"

    def coerce(self, x): ...

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return a / b

    def is_zero(self, a) -> bool:
        return a == 0

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def sample(self, rng: random.Random): ...

    def sample_set_size(self) -> float:
        return math.inf

    def format(self, a) -> str:
        return str(a)

    # -- elimination -----------------------------------------------------

    def _echelon(self, rows: Matrix) -> tuple[Matrix, list[int], int]:
        """Row-reduce a copy of ``rows``; returns (matrix, pivot columns, swap parity)."""
        m = [list(r) for r in rows]
        n_rows = len(m)
        n_cols = len(m[0]) if m else 0
        pivots: list[int] = []
        parity = 0
        r = 0
        for c in range(n_cols):
            if r == n_rows:
                break
            piv = self._pick_pivot(m, r, c)
            if piv is None:
                continue
            if piv != r:
                m[r], m[piv] = m[piv], m[r]
                parity ^= 1
            inv = self.div(self.one, m[r][c])
            for i in range(r + 1, n_rows):
                if self.is_zero(m[i][c]):
                    continue
                f = self.mul(m[i][c], inv)
                row_i, row_r = m[i], m[r]
                for j in range(c, n_cols):
                    row_i[j] = self.sub(row_i[j], self.mul(f, row_r[j]))
            pivots.append(c)
            r += 1
        return m, pivots, parity

    def _pick_pivot(self, m: Matrix, r: int, c: int) -> int | None:
        for i in range(r, len(m)):
            if not self.is_zero(m[i][c]):
                return i
        return None

    def rank(self, rows: Matrix) -> int:
        if not rows:
            return 0
        return len(self._echelon(rows)[1])

    def det(self, rows: Matrix):
        n = len(rows)
        if n == 0:
            return self.one
        if any(len(r) != n for r in rows):
            raise ValueError("determinant of a non-square matrix")
        m, pivots, parity = self._echelon(rows)
        if len(pivots) < n:
            return self.zero
        acc = self.one
        for i in range(n):
            acc = self.mul(acc, m[i][i])
        return self.neg(acc) if parity else acc

    def solve(self, a: Matrix, b: Sequence) -> list | None:
        """One solution of ``a x = b`` or None when inconsistent (free variables set to 0)."""
        n_cols = len(a[0]) if a else 0
        aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
        m, pivots, _ = self._echelon(aug)
        if n_cols in pivots:
            return None
        x = [self.zero] * n_cols
        for r in reversed(range(len(pivots))):
            c = pivots[r]
            acc = m[r][n_cols]
            for j in range(c + 1, n_cols):
                acc = self.sub(acc, self.mul(m[r][j], x[j]))
            x[c] = self.div(acc, m[r][c])
        return x


class RationalField(Field):
    """Exact rationals; rank and det use fraction-free (Bareiss) elimination."""

    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def __init__(self, sample_bound: int = 1 << 20):
        self.sample_bound = sample_bound

    def coerce(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x.strip())
        if isinstance(x, float):
            return Fraction(x).limit_denominator(10**12)
        return Fraction(x)

    def sample(self, rng: random.Random) -> Fraction:
        return Fraction(rng.randint(-self.sample_bound, self.sample_bound))

    def sample_set_size(self) -> float:
        return 2 * self.sample_bound + 1

    def format(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    @staticmethod
    def _integer_rows(rows: Matrix) -> tuple[list[list[int]], Fraction]:
        out = []
        scale = Fraction(1)
        for row in rows:
            den = 1
            for x in row:
                den = math.lcm(den, Fraction(x).denominator)
            out.append([int(Fraction(x) * den) for x in row])
            scale *= den
        return out, scale

    def rank(self, rows: Matrix) -> int:
        if not rows:
            return 0
        m, _ = self._integer_rows(rows)
        return bareiss(m)[0]

    def det(self, rows: Matrix):
        n = len(rows)
        if n == 0:
            return self.one
        if any(len(r) != n for r in rows):
            raise ValueError("determinant of a non-square matrix")
        m, scale = self._integer_rows(rows)
        rank, det = bareiss(m)
        if rank < n:
            return self.zero
        return Fraction(det) / scale


def bareiss(m: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination on an integer matrix (modified in place).

    Returns ``(rank, signed last pivot)``; for a square non-singular matrix the
    second value is the determinant.
    """
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    prev = 1
    sign = 1
    r = 0
    last = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        p = m[r][c]
        row_r = m[r]
        for i in range(r + 1, n_rows):
            row_i = m[i]
            f = row_i[c]
            for j in range(c + 1, n_cols):
                row_i[j] = (p * row_i[j] - f * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        last = p
        r += 1
    return r, sign * last


class PrimeField(Field):
    """Z_p with elements stored as ints in [0, p)."""

    name = "prime"
    zero = 0
    one = 1

    def __init__(self, p: int = MERSENNE_61):
        self.p = p

    def coerce(self, x) -> int:
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        if isinstance(x, float):
            if not x.is_integer():
                return self.coerce(Fraction(x))
            x = int(x)
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise ZeroDivisionError("division by zero in Z_p")
        return (a * pow(b, -1, self.p)) % self.p

    def sample(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def sample_set_size(self) -> float:
        return float(self.p)


class RealField(Field):
    """Double precision.  Zero tests and rank use a relative pivot threshold."""

    name = "float"
    exact = False
    zero = 0.0
    one = 1.0

    def __init__(self, rel_tol: float = 1e-8):
        self.rel_tol = rel_tol

    def coerce(self, x) -> float:
        if isinstance(x, str):
            return float(Fraction(x.strip()))
        return float(x)

    def sample(self, rng: random.Random) -> float:
        return rng.uniform(-1.0, 1.0)

    def format(self, a) -> str:
        return repr(float(a))

    def _pick_pivot(self, m: Matrix, r: int, c: int) -> int | None:
        best = max(range(r, len(m)), key=lambda i: abs(m[i][c]))
        return None if m[best][c] == 0 else best

    def rank(self, rows: Matrix) -> int:
        return numeric_rank(np.asarray(rows, dtype=float), self.rel_tol)

    def det(self, rows: Matrix):
        if not rows:
            return 1.0
        return float(np.linalg.det(np.asarray(rows, dtype=float)))


def numeric_rank(a: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Rank by complete-pivoting elimination; pivots below rel_tol * max|a| count as zero."""
    a = np.array(a, dtype=float)
    if a.size == 0:
        return 0
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return 0
    tol = rel_tol * scale
    rank = 0
    n_rows, n_cols = a.shape
    for r in range(min(n_rows, n_cols)):
        sub = np.abs(a[r:, r:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= tol:
            break
        i += r
        j += r
        a[[r, i]] = a[[i, r]]
        a[:, [r, j]] = a[:, [j, r]]
        a[r + 1 :] -= np.outer(a[r + 1 :, r] / a[r, r], a[r])
        rank += 1
    return rank


def get_field(name: str | Field) -> Field:
    if isinstance(name, Field):
        return name
    if name in ("prime", "zp", "modp"):
        return PrimeField()
    if name in ("rational", "q", "fraction"):
        return RationalField()
    if name in ("float", "real", "double"):
        return RealField()
    raise ValueError(f"unknown field {name!r}")
