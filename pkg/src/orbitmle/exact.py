"""Exact rank computations over the rationals.

Ranks are computed by fraction-free (Bareiss) elimination on integer
matrices. Rational inputs are first cleared of denominators row by row,
which does not change the rank.
"""

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

__all__ = ["as_fraction_rows", "integer_rows", "bareiss_rank", "exact_rank", "in_row_span"]


def as_fraction_rows(mat) -> list[list[Fraction]]:
    """Convert a 2-d array-like of ints, Fractions, floats or strings to Fractions.

    Floats are converted exactly (their binary value), strings are parsed as
    decimal or ``p/q`` literals.
    """
    rows = [list(r) for r in mat]
    out = []
    for r in rows:
        conv = []
        for x in r:
            if isinstance(x, (np.integer,)):
                x = int(x)
            elif isinstance(x, np.floating):
                x = float(x)
            if isinstance(x, float) and not np.isfinite(x):
                raise ValueError("non-finite entry cannot be converted to a rational")
            conv.append(Fraction(x))
        out.append(conv)
    return out


def integer_rows(rows: Iterable[Sequence[Rational]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators to obtain an integer matrix."""
    out = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = 1
        for x in r:
            den = lcm(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free Gaussian elimination.

    The input is not modified. All intermediate quantities stay integral
    because each division by the previous pivot is exact.
    """
    a = [list(map(int, r)) for r in rows]
    n_rows = len(a)
    if n_rows == 0:
        return 0
    n_cols = len(a[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        if rank == n_rows:
            break
        piv = None
        for r in range(rank, n_rows):
            if a[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        prow = a[rank]
        for r in range(rank + 1, n_rows):
            row = a[r]
            f = row[col]
            if f == 0:
                # row_j <- p * row_j / prev, still exact
                if p != prev:
                    for c in range(col + 1, n_cols):
                        row[c] = row[c] * p // prev
            else:
                for c in range(col + 1, n_cols):
                    row[c] = (row[c] * p - f * prow[c]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank


def exact_rank(mat) -> int:
    """Exact rank of a matrix with rational (or exactly representable) entries."""
    rows = as_fraction_rows(mat)
    if not rows or not rows[0]:
        return 0
    return bareiss_rank(integer_rows(rows))


def in_row_span(vec, basis) -> bool:
    """True iff ``vec`` is a rational linear combination of the rows of ``basis``.

    With an empty basis this holds only for the zero vector.
    """
    vec_rows = as_fraction_rows([vec])
    basis_rows = as_fraction_rows(basis) if len(basis) else []
    if not basis_rows:
        return all(x == 0 for x in vec_rows[0])
    r0 = bareiss_rank(integer_rows(basis_rows))
    r1 = bareiss_rank(integer_rows(basis_rows + vec_rows))
    return r1 == r0
