"""Sparse exact linear algebra over Q.

Rows are stored as integer dicts (column -> coefficient) after clearing
denominators; elimination uses integer cross-multiplication with gcd
normalization, so everything stays exact.  Matrices coming from
truncated Hom complexes are very sparse and quasi-banded, which plain
first-column pivoting handles well at desk scale.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable

IntRow = dict[int, int]


def row_from_fractions(entries: dict[int, Fraction]) -> IntRow:
    den = 1
    for v in entries.values():
        den = den * v.denominator // gcd(den, v.denominator)
    out = {c: int(v * den) for c, v in entries.items() if v}
    return normalize_row(out)


def normalize_row(row: IntRow) -> IntRow:
    row = {c: v for c, v in row.items() if v}
    if not row:
        return row
    g = 0
    for v in row.values():
        g = gcd(g, abs(v))
        if g == 1:
            break
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


class Eliminator:
    """Incremental row echelon over Q with integer arithmetic."""

    def __init__(self):
        self.pivots: dict[int, IntRow] = {}  # pivot column -> row

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: IntRow) -> IntRow:
        """Eliminate at the smallest pivot column first; the pivot of every
        stored row is its smallest column, so the front only moves right."""
        row = dict(row)
        steps = 0
        while True:
            hit = None
            for c in row:
                if c in self.pivots and (hit is None or c < hit):
                    hit = c
            if hit is None:
                return normalize_row(row)
            piv = self.pivots[hit]
            a, b = piv[hit], row[hit]
            g = gcd(a, b)
            am, bm = a // g, b // g
            if am != 1:
                for c in list(row):
                    row[c] *= am
            for c, v in piv.items():
                nv = row.get(c, 0) - bm * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            steps += 1
            if steps % 8 == 0 and row:
                big = max(abs(v) for v in row.values())
                if big.bit_length() > 128:
                    row = dict(normalize_row(row))

    def add(self, row: IntRow) -> bool:
        """Reduce and insert; returns True if the row enlarged the span."""
        red = self.reduce(row)
        if not red:
            return False
        pc = min(red)
        if red[pc] < 0:
            red = {c: -v for c, v in red.items()}
        self.pivots[pc] = red
        return True

    def contains(self, row: IntRow) -> bool:
        return not self.reduce(row)


def rank_of(rows: Iterable[IntRow]) -> int:
    elim = Eliminator()
    for r in rows:
        elim.add(r)
    return elim.rank


def image_meets_subspace(rows: Iterable[IntRow], inside) -> int:
    """dim( rowspan(rows) /\\ {vectors supported on columns with inside(c)} ).

    Equals rank(M) - rank(M restricted to the complementary columns).
    """
    full = Eliminator()
    outside = Eliminator()
    for r in rows:
        full.add(r)
        outside.add({c: v for c, v in r.items() if not inside(c)})
    return full.rank - outside.rank


class LinearSystem:
    """Solve M x = b exactly for sparse M given row-wise."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.elim = Eliminator()
        self.AUG = ncols  # augmented column index

    def add_equation(self, coeffs: dict[int, Fraction], rhs: Fraction) -> None:
        entries = dict(coeffs)
        if rhs:
            entries[self.AUG] = rhs
        row = row_from_fractions(entries)
        self.elim.add(row)

    def solve(self) -> list[Fraction] | None:
        """One exact solution (free unknowns set to 0), or None."""
        for pc, row in self.elim.pivots.items():
            if pc == self.AUG:
                return None  # 0 = nonzero row
        x: dict[int, Fraction] = {}
        for pc in sorted(self.elim.pivots, reverse=True):
            row = self.elim.pivots[pc]
            acc = Fraction(row.get(self.AUG, 0))
            for c, v in row.items():
                if c == pc or c == self.AUG:
                    continue
                acc -= v * x.get(c, Fraction(0))
            x[pc] = acc / row[pc]
        return [x.get(c, Fraction(0)) for c in range(self.ncols)]


def solve_system(rows: list[dict[int, Fraction]], ncols: int,
                 rhs: list[Fraction]) -> list[Fraction] | None:
    sys = LinearSystem(ncols)
    for row, b in zip(rows, rhs):
        sys.add_equation(row, b)
    return sys.solve()


def kernel_basis(rows: Iterable[IntRow], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : M x = 0} with rows the equations of M."""
    elim = Eliminator()
    for r in rows:
        elim.add(r)
    pivot_cols = set(elim.pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    ordered = sorted(elim.pivots)
    for f in free_cols:
        x: dict[int, Fraction] = {f: Fraction(1)}
        for pc in reversed(ordered):
            row = elim.pivots[pc]
            acc = Fraction(0)
            for c, v in row.items():
                if c != pc:
                    acc -= v * x.get(c, Fraction(0))
            if acc:
                x[pc] = acc / row[pc]
        basis.append([x.get(c, Fraction(0)) for c in range(ncols)])
    return basis
