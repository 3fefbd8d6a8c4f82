"""Exact rank and nullspace of rational matrices.

Rank uses fraction-free (Bareiss) elimination on an integer copy of the
matrix, so no pivot tolerance is involved anywhere.  Matrices with entries
in a real quadratic field ``Q(sqrt(m))`` are eliminated with exact
arithmetic in that field.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(v) for v in row]
        den = 1
        for v in row:
            den = den * v.denominator // math.gcd(den, v.denominator)
        out.append([int(v * den) for v in row])
    return out


def bareiss_echelon(rows: Sequence[Sequence]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form; returns the reduced rows and pivot columns."""
    a = _integer_rows(rows)
    if not a:
        return [], []
    nrows, ncols = len(a), len(a[0])
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c + 1, ncols):
                ai[j] = (piv * ai[j] - f * ar[j]) // prev
            ai[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(bareiss_echelon(rows)[1])


def left_nullspace(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of ``{c : sum_i c[i] * rows[i] = 0}`` with integer-valued entries."""
    n = len(rows)
    if n == 0:
        return []
    m = len(rows[0])
    # solve A^T c = 0 by Gauss-Jordan over the rationals
    t = [[Fraction(rows[i][j]) for i in range(n)] for j in range(m)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if t[i][c]), None)
        if p is None:
            continue
        t[r], t[p] = t[p], t[r]
        inv = 1 / t[r][c]
        t[r] = [v * inv for v in t[r]]
        for i in range(m):
            if i != r and t[i][c]:
                f = t[i][c]
                t[i] = [a - f * b for a, b in zip(t[i], t[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * n
        vec[fcol] = Fraction(1)
        for row_idx, pcol in enumerate(pivots):
            vec[pcol] = -t[row_idx][fcol]
        den = 1
        for v in vec:
            den = den * v.denominator // math.gcd(den, v.denominator)
        vec = [v * den for v in vec]
        g = 0
        for v in vec:
            g = math.gcd(g, int(v))
        basis.append([v / g for v in vec] if g > 1 else vec)
    return basis


class Surd:
    """Element ``a + b*sqrt(m)`` of a real quadratic field, ``m`` squarefree and not 1."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a, b=0, m=2):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.m = m

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __add__(self, o: "Surd") -> "Surd":
        return Surd(self.a + o.a, self.b + o.b, self.m)

    def __sub__(self, o: "Surd") -> "Surd":
        return Surd(self.a - o.a, self.b - o.b, self.m)

    def __mul__(self, o: "Surd") -> "Surd":
        return Surd(self.a * o.a + self.m * self.b * o.b, self.a * o.b + self.b * o.a, self.m)

    def inverse(self) -> "Surd":
        norm = self.a * self.a - self.m * self.b * self.b  # nonzero: sqrt(m) is irrational
        return Surd(self.a / norm, -self.b / norm, self.m)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def __repr__(self) -> str:
        return f"{self.a} + {self.b}*sqrt({self.m})"


def rank_quadratic(rows: Sequence[Sequence[tuple]], m: int) -> int:
    """Exact rank of a matrix whose entries are pairs ``(a, b)`` meaning ``a + b*sqrt(m)``."""
    a = [[Surd(x, y, m) for x, y in row] for row in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        pivot_row = a[r]
        for i in range(r + 1, nrows):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], pivot_row)]
        r += 1
    return r
