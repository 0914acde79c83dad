"""Row-level elimination kernels.

Two reduced-row-echelon cores sit behind the public linalg API:

* prime fields: numpy int64 rows, vectorized row updates, inverses by
  Fermat exponentiation;
* rationals: integer rows (denominators cleared up front) reduced by
  fraction-free Gauss-Jordan with exact divisions.

Both use the same pivot rule (leftmost column, topmost usable row), so
each computes the unique RREF of its input.

Over Q the canonical form is kept in two interchangeable shapes: the RREF
proper (Fraction rows with unit pivots) and the primitive shape (integer
rows with content 1 and positive pivot).  The bijection row <-> row/pivot
lets subspace equality, intersection and span accumulation run entirely
on integers; Fractions are materialized only at the public boundary.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import ContractViolation

__all__ = [
    "rref_fp",
    "rref_q_int",
    "clear_denominators",
    "fracs_from_primitive",
    "reduce_row_q",
    "reduce_row_fp",
    "rref_rows",
]


def rref_fp(rows: list, width: int, p: int):
    """RREF of integer rows modulo the prime p.

    Returns (rows, rank, pivot_cols); rows is a list of int tuples of the
    same length as the input, zero rows at the bottom.
    """
    if not rows:
        return [], 0, []
    a = np.array(rows, dtype=np.int64) % p
    nrows = a.shape[0]
    r = 0
    pivots: list[int] = []
    for c in range(width):
        if r == nrows:
            break
        col = a[r:, c]
        hit = int(np.argmax(col != 0))
        if col[hit] == 0:
            continue
        pr = r + hit
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        v = int(a[r, c])
        if v != 1:
            a[r] = (a[r] * pow(v, p - 2, p)) % p
        coef = a[:, c].copy()
        coef[r] = 0
        a -= np.outer(coef, a[r])
        a %= p
        pivots.append(c)
        r += 1
    return [tuple(row) for row in a.tolist()], r, pivots


def clear_denominators(row) -> list[int]:
    """Scale a row of Fractions/ints to integers (common denominator)."""
    den = 1
    fracs = []
    for x in row:
        f = x if isinstance(x, Fraction) else Fraction(x)
        fracs.append(f)
        den = den * f.denominator // math.gcd(den, f.denominator)
    return [int(f.numerator * (den // f.denominator)) for f in fracs]


def _primitive(row: list[int], pivot_col: int) -> tuple[int, ...]:
    g = 0
    for x in row:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                break
    if g == 0:
        return tuple(row)
    if row[pivot_col] < 0:
        g = -g
    return tuple(x // g for x in row)


def rref_q_int(irows: list, width: int):
    """Fraction-free Gauss-Jordan on integer rows.

    Returns (prim_rows, rank, pivot_cols): the primitive canonical shape,
    zero rows dropped.  Every interior division is exact by the standard
    minor identities; the test suite pins this against a plain Fraction
    elimination bitwise.
    """
    if not irows:
        return [], 0, []
    a = [list(r) for r in irows]
    nrows = len(a)
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(width):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pr is None:
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        rr = a[r]
        for i in range(nrows):
            if i == r:
                continue
            ri = a[i]
            fac = ri[c]
            if fac:
                if prev == 1:
                    a[i] = [piv * x - fac * y for x, y in zip(ri, rr)]
                else:
                    a[i] = [(piv * x - fac * y) // prev for x, y in zip(ri, rr)]
            elif piv != prev:
                if prev == 1:
                    a[i] = [piv * x for x in ri]
                else:
                    a[i] = [piv * x // prev for x in ri]
        prev = piv
        pivots.append(c)
        r += 1
    out = [_primitive(a[t], c) for t, c in enumerate(pivots)]
    for i in range(r, nrows):
        if any(a[i]):
            raise ContractViolation("dependent row failed to vanish")
    return out, r, pivots


def reduce_row_q(v: list[int], prim, pivots) -> list[int]:
    """Reduce an integer row against primitive canonical rows over Q.

    Returns the (gcd-trimmed) residue; all zeros iff the row lies in the
    span of the given rows.
    """
    for row, pc in zip(prim, pivots):
        coef = v[pc]
        if coef:
            piv = row[pc]
            v = [piv * x - coef * y for x, y in zip(v, row)]
            g = 0
            for x in v:
                if x:
                    g = math.gcd(g, x)
                    if g == 1:
                        break
            if g > 1:
                v = [x // g for x in v]
    return v


def reduce_row_fp(v: list[int], prim, pivots, p: int) -> list[int]:
    """Reduce a residue row against canonical rows over F_p (unit pivots)."""
    for row, pc in zip(prim, pivots):
        coef = v[pc]
        if coef:
            v = [(x - coef * y) % p for x, y in zip(v, row)]
    return v


def fracs_from_primitive(prim_rows, pivots) -> list[tuple[Fraction, ...]]:
    """Materialize the RREF proper from the primitive integer shape."""
    out = []
    for row, c in zip(prim_rows, pivots):
        piv = row[c]
        out.append(tuple(Fraction(x, piv) for x in row))
    return out


def rref_rows(field, rows: list, width: int):
    """Field-dispatched RREF for general scalar rows (Matrix-level use).

    Returns rows in the field's public scalar type, zero rows kept at the
    bottom so the output shape matches the input.
    """
    if field.p is not None:
        return rref_fp([list(map(int, r)) for r in rows], width, field.p)
    irows = [clear_denominators(r) for r in rows]
    prim, rank, pivots = rref_q_int(irows, width)
    out = fracs_from_primitive(prim, pivots)
    zero_row = tuple(Fraction(0) for _ in range(width))
    out.extend(zero_row for _ in range(len(rows) - rank))
    return out, rank, pivots
