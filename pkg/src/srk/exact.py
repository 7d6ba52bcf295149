"""Exact rational scalars and fraction-free linear algebra.

Everything is computed over the rationals, with no floating point anywhere.
Matrix eliminations clear denominators row by row and then work over the
integers; every produced row is divided by its content so entries stay
bounded by minors of the input.  Results come back as `fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

Rational = Fraction


def rational_str(x) -> str:
    """Serialize a rational as ``p/q``, or ``p`` when the denominator is 1."""
    return str(Fraction(x))


class RatMatrix:
    """Dense matrix of rationals; shape is fixed at construction."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], cols: Optional[int] = None):
        data = tuple(tuple(Fraction(x) for x in row) for row in entries)
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("rows have inconsistent lengths")
            if cols is not None and cols != width:
                raise ValueError("explicit cols does not match row width")
            cols = width
        elif cols is None:
            cols = 0
        self.entries = data
        self.rows = len(data)
        self.cols = cols

    def row(self, i):
        return self.entries[i]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(list(zip(*self.entries)), cols=self.rows)

    def mul_vec(self, x: Sequence) -> list:
        if len(x) != self.cols:
            raise ValueError("vector length does not match column count")
        return [sum(a * b for a, b in zip(row, x)) for row in self.entries]

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"


def _int_row(row) -> list:
    """Clear denominators and divide out the content; returns a primitive int row."""
    den = 1
    for x in row:
        d = x.denominator if isinstance(x, Fraction) else 1
        if d != 1:
            den = den * d // math.gcd(den, d)
    if den == 1:
        out = [int(x) for x in row]
    else:
        out = [int(x * den) for x in row]
    g = 0
    for v in out:
        g = math.gcd(g, v)
        if g == 1:
            return out
    if g > 1:
        out = [v // g for v in out]
    return out


def _normalize(row: list) -> None:
    g = 0
    for v in row:
        g = math.gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for i, v in enumerate(row):
            row[i] = v // g


class Echelon:
    """Incremental integer row-echelon accumulator.

    Rows are inserted in caller order; each is reduced against the pivots
    found so far and becomes a new pivot at its leading column unless it
    reduces to zero.  This is exact Gaussian elimination with the first
    nonzero entry in each column acting as the pivot, so rank, reduced
    echelon form, and null-space output are all deterministic.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, list] = {}  # leading column -> primitive int row
        self._reduced = False

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce(self, row: list) -> tuple[Optional[int], list]:
        """Reduce against current pivots; returns (leading column or None, row)."""
        pivots = self.pivots
        c = 0
        n = self.ncols
        while c < n:
            x = row[c]
            if not x:
                c += 1
                continue
            prow = pivots.get(c)
            if prow is None:
                return c, row
            pv = prow[c]
            g = math.gcd(pv, x)
            a, b = pv // g, x // g
            row = [a * u - b * v for u, v in zip(row, prow)]
            _normalize(row)
            c += 1
        return None, row

    def add_row(self, row) -> Optional[int]:
        """Insert a row (rationals or ints); returns its pivot column, or None."""
        lead, red = self._reduce(_int_row(row))
        if lead is None:
            return None
        if red[lead] < 0:
            red = [-v for v in red]
        self.pivots[lead] = red
        self._reduced = False
        return lead

    def reduces_to_zero(self, row) -> bool:
        """Non-destructive membership test of a row in the current row span."""
        lead, _ = self._reduce(_int_row(row))
        return lead is None

    def back_reduce(self) -> None:
        """Clear every pivot column from all other pivot rows (RREF shape)."""
        if self._reduced:
            return
        for c in sorted(self.pivots, reverse=True):
            prow = self.pivots[c]
            pv = prow[c]
            for c2, row in self.pivots.items():
                if c2 >= c or not row[c]:
                    continue
                x = row[c]
                g = math.gcd(pv, x)
                a, b = pv // g, x // g
                new = [a * u - b * v for u, v in zip(row, prow)]
                _normalize(new)
                if new[c2] < 0:
                    new = [-v for v in new]
                self.pivots[c2] = new
        self._reduced = True

    def nullspace_basis(self) -> list[list[Fraction]]:
        """One basis vector per free column, in ascending free-column order."""
        self.back_reduce()
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for f in free:
            vec = [Fraction(0)] * self.ncols
            vec[f] = Fraction(1)
            for c, row in self.pivots.items():
                if row[f]:
                    vec[c] = Fraction(-row[f], row[c])
            basis.append(vec)
        return basis


def rank(m: RatMatrix) -> int:
    """Exact rank over the rationals."""
    ech = Echelon(m.cols)
    for row in m.entries:
        ech.add_row(row)
    return ech.rank


def nullspace(m: RatMatrix) -> list[list[Fraction]]:
    """Basis of ``{x : m x = 0}``; one vector per free column, ascending."""
    ech = Echelon(m.cols)
    for row in m.entries:
        ech.add_row(row)
    return ech.nullspace_basis()


def solve(m: RatMatrix, rhs: Sequence) -> Optional[list[Fraction]]:
    """A particular solution of ``m x = rhs`` (free variables 0), or None."""
    if len(rhs) != m.rows:
        raise ValueError("right-hand side length does not match row count")
    n = m.cols
    ech = Echelon(n + 1)
    for row, b in zip(m.entries, rhs):
        lead = ech.add_row(list(row) + [Fraction(b)])
        if lead == n:
            return None
    ech.back_reduce()
    x = [Fraction(0)] * n
    for c, row in ech.pivots.items():
        x[c] = Fraction(row[n], row[c])
    return x


def solve_unique(m: RatMatrix, rhs: Sequence) -> list[Fraction]:
    """The unique solution of ``m x = rhs``; raises if none or many exist."""
    if len(rhs) != m.rows:
        raise ValueError("right-hand side length does not match row count")
    n = m.cols
    ech = Echelon(n + 1)
    for row, b in zip(m.entries, rhs):
        if ech.add_row(list(row) + [Fraction(b)]) == n:
            raise ValueError("inconsistent linear system")
    if ech.rank != n:
        raise ValueError("linear system is rank deficient")
    ech.back_reduce()
    x = [Fraction(0)] * n
    for c, row in ech.pivots.items():
        x[c] = Fraction(row[n], row[c])
    return x


def span_equal(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    """True iff the two vector lists span the same subspace."""
    a = [list(v) for v in a]
    b = [list(v) for v in b]
    lengths = {len(v) for v in a} | {len(v) for v in b}
    if len(lengths) > 1:
        raise ValueError("vectors have mismatched lengths")
    if not lengths:
        return True
    n = lengths.pop()
    ra = Echelon(n)
    for v in a:
        ra.add_row(v)
    rb = Echelon(n)
    for v in b:
        rb.add_row(v)
    if ra.rank != rb.rank:
        return False
    for v in b:
        ra.add_row(v)
    return ra.rank == rb.rank


def rank_of_vectors(vectors: Sequence[Sequence], ncols: int) -> int:
    """Rank of a list of equal-length vectors (empty list allowed)."""
    ech = Echelon(ncols)
    for v in vectors:
        ech.add_row(v)
    return ech.rank
