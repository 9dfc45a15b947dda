"""Exact linear algebra over the rationals.

Dense routines (determinant, inverse) target the small square matrices that
show up when restricting linear forms to facets; the sparse rank routine is
the workhorse behind homology and Hilbert-function computations.  No floats
anywhere: entries are ints or fractions.Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class SingularMatrixError(ValueError):
    """Raised when inverting a matrix with zero determinant."""


def det(matrix) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Accepts any sequence of rows with int/Fraction entries.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = pivot
    return sign * a[n - 1][n - 1]


def invert(matrix) -> list[list[Fraction]]:
    """Exact inverse via Gauss-Jordan elimination.

    Raises SingularMatrixError when the matrix is singular.
    """
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    if any(len(row) != 2 * n for row in a):
        raise ValueError("inverse needs a square matrix")
    for col in range(n):
        pivot_row = None
        for i in range(col, n):
            if a[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[pivot_row] = a[pivot_row], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def _integer_row(row) -> dict[int, int]:
    """Scale a row to coprime integers; scaling never changes the row space."""
    if isinstance(row, dict):
        items = row.items()
    else:
        items = ((j, v) for j, v in enumerate(row))
    entries = {}
    denom_lcm = 1
    for j, v in items:
        if v == 0:
            continue
        f = Fraction(v)
        entries[j] = f
        denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
    if not entries:
        return {}
    ints = {j: int(v * denom_lcm) for j, v in entries.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {j: v // g for j, v in ints.items()}
    return ints


def matrix_rank(rows) -> int:
    """Rank over Q of a sparse matrix given as rows of {column: value} dicts.

    Rows may also be plain sequences.  Elimination is fraction-free: rows are
    cross-multiplied with integer arithmetic and re-reduced by their gcd, so
    entries stay small without ever leaving exact arithmetic.
    """
    active: list[dict[int, int]] = []
    for row in rows:
        r = _integer_row(row)
        if r:
            active.append(r)

    # column -> indices of active rows containing it, kept current
    col_rows: dict[int, set[int]] = {}
    alive: set[int] = set()
    for idx, r in enumerate(active):
        alive.add(idx)
        for c in r:
            col_rows.setdefault(c, set()).add(idx)

    rank = 0
    while alive:
        # cheapest pivot: shortest row, then its rarest column (Markowitz-ish)
        pivot_idx = min(alive, key=lambda i: (len(active[i]), i))
        prow = active[pivot_idx]
        if not prow:
            alive.discard(pivot_idx)
            continue
        pcol = min(prow, key=lambda c: (len(col_rows[c]), c))
        pval = prow[pcol]
        rank += 1
        alive.discard(pivot_idx)
        for c in prow:
            col_rows[c].discard(pivot_idx)

        targets = [i for i in col_rows.get(pcol, ()) if i in alive]
        for i in targets:
            r = active[i]
            f = r[pcol]
            new = {}
            for c, v in r.items():
                w = pval * v - f * prow.get(c, 0)
                if w:
                    new[c] = w
            for c, v in prow.items():
                if c not in r:
                    w = -f * v
                    if w:
                        new[c] = w
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                if g > 1:
                    new = {c: v // g for c, v in new.items()}
            # refresh incidence for columns that appeared or vanished
            for c in r:
                if c not in new:
                    col_rows[c].discard(i)
            for c in new:
                if c not in r:
                    col_rows.setdefault(c, set()).add(i)
            active[i] = new
            if not new:
                alive.discard(i)
    return rank
