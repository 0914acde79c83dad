"""Independent reference implementations used only as test oracles.

Deliberately naive: plain Gauss-Jordan over Fraction / residues, textbook
pivoting, no shortcuts.  The production kernels must match these bitwise.
"""

from __future__ import annotations

from fractions import Fraction


def naive_rref_q(rows):
    """Reduced row-echelon form over Q by eager Fraction elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return [], 0, []
    ncols = len(m[0])
    r = 0
    pivots = []
    for c in range(ncols):
        if r == len(m):
            break
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m], r, pivots


def naive_rref_fp(rows, p):
    """Reduced row-echelon form over F_p by per-element modular elimination."""
    m = [[int(x) % p for x in row] for row in rows]
    if not m:
        return [], 0, []
    ncols = len(m[0])
    r = 0
    pivots = []
    for c in range(ncols):
        if r == len(m):
            break
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m], r, pivots


def rank_by_minors(rows):
    """Rank over Q as the largest size of a nonvanishing minor.

    Exponential; fine for the tiny matrices it is used on.
    """
    from itertools import combinations

    m = [[Fraction(x) for x in row] for row in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0

    def det(idx_r, idx_c):
        k = len(idx_r)
        if k == 0:
            return Fraction(1)
        sub = [[m[i][j] for j in idx_c] for i in idx_r]
        if k == 1:
            return sub[0][0]
        total = Fraction(0)
        sign = 1
        for t in range(k):
            if sub[0][t] != 0:
                minor_r = list(range(1, k))
                total += sign * sub[0][t] * det(
                    [idx_r[i] for i in minor_r],
                    [idx_c[j] for j in range(k) if j != t],
                )
            sign = -sign
        return total

    for size in range(min(nr, nc), 0, -1):
        for rows_idx in combinations(range(nr), size):
            for cols_idx in combinations(range(nc), size):
                if det(list(rows_idx), list(cols_idx)) != 0:
                    return size
    return 0
