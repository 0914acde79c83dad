"""Triangular-times-permutation factorizations of square matrices.

Two factorizations:

* Bruhat: every invertible g splits as u1 @ P_s @ u2 with u1, u2 upper
  triangular invertible; the permutation s is unique (the cell label) and
  is recovered independently from corner ranks by :func:`bruhat_cell`.

* ULP: every square m, singular or not, splits as u @ l @ P_p with u upper
  triangular and l lower triangular.  The factor named by ``normalization``
  is made unipotent.  The unipotent-lower variant always exists and is
  computed directly; the unipotent-upper variant can be infeasible for
  singular m (see :class:`~borelenv.errors.UlpInfeasible`), in which case
  the complete search here proves it and raises.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Literal

from .errors import ContractViolation, InvalidInput, NotInvertible, ResourceGuard, UlpInfeasible
from .linalg import Matrix, rref, solve_exact
from .weyl import Permutation, perm_matrix

__all__ = [
    "BruhatFactors",
    "UlpFactors",
    "bruhat_decompose",
    "bruhat_cell",
    "ulp_decompose",
]

Normalization = Literal["upper", "lower"]

ULP_SEARCH_LIMIT = 8


@dataclass(frozen=True)
class BruhatFactors:
    u1: Matrix
    s: Permutation
    u2: Matrix

    def recompose(self) -> Matrix:
        return self.u1 @ perm_matrix(self.s, self.u1.field) @ self.u2


@dataclass(frozen=True)
class UlpFactors:
    u: Matrix
    l: Matrix
    p: Permutation
    normalization: Normalization

    def recompose(self) -> Matrix:
        return self.u @ self.l @ perm_matrix(self.p, self.u.field)


def _require_square(m: Matrix):
    if not m.is_square:
        raise InvalidInput(f"square matrix required, got {m.nrows}x{m.ncols}")


def bruhat_decompose(g: Matrix) -> BruhatFactors:
    """Split invertible g as u1 @ P_s @ u2 with u1, u2 upper triangular.

    Elimination sweeps columns left to right; the pivot of each column is
    its lowest nonzero entry.  Entries above the pivot are cleared by row
    operations (upper triangular on the left), the rest of the pivot row by
    column operations (upper triangular on the right).  What remains is a
    monomial matrix P_s @ D whose scaling D is folded into u2.
    """
    _require_square(g)
    f = g.field
    n = g.nrows
    zero = f.zero()
    m = g.rows_list()
    u1 = [[f.one() if i == j else zero for j in range(n)] for i in range(n)]
    u2 = [[f.one() if i == j else zero for j in range(n)] for i in range(n)]
    images = [0] * n
    for j in range(n):
        pivot_row = None
        for i in range(n - 1, -1, -1):
            if m[i][j] != zero:
                pivot_row = i
                break
        if pivot_row is None:
            raise NotInvertible(f"column {j} is zero")
        i = pivot_row
        images[j] = i + 1
        piv = m[i][j]
        for r in range(i):
            if m[r][j] == zero:
                continue
            fac = f.div(m[r][j], piv)
            # m <- L(r,i;-fac) m  and  u1 <- u1 L(r,i;+fac)
            m[r] = [f.sub(x, f.mul(fac, y)) for x, y in zip(m[r], m[i])]
            for t in range(n):
                u1[t][i] = f.add(u1[t][i], f.mul(fac, u1[t][r]))
        for c in range(j + 1, n):
            if m[i][c] == zero:
                continue
            fac = f.div(m[i][c], piv)
            # m <- m R(j,c;-fac)  and  u2 <- R(j,c;+fac) u2
            for t in range(n):
                m[t][c] = f.sub(m[t][c], f.mul(fac, m[t][j]))
            u2[j] = [f.add(x, f.mul(fac, y)) for x, y in zip(u2[j], u2[c])]
    s = Permutation(tuple(images))
    # m is now P_s @ D with D = diag(m[s(j), j]); fold D into u2.
    for j in range(n):
        d = m[images[j] - 1][j]
        u2[j] = [f.mul(d, x) for x in u2[j]]
    u1_m = Matrix.from_rows(f, u1)
    u2_m = Matrix.from_rows(f, u2)
    factors = BruhatFactors(u1_m, s, u2_m)
    if factors.recompose() != g:
        raise ContractViolation("Bruhat recomposition failed")
    return factors


def bruhat_cell(g: Matrix) -> Permutation:
    """The Bruhat cell label of invertible g, from corner ranks alone.

    With r(i, j) = rank of the submatrix on rows i..n and columns 1..j,
    w(j) is the unique i where the second difference of r equals 1.  The
    corner ranks are two-sided invariants under upper triangular
    multiplication, so this is independent of any elimination choices.
    """
    _require_square(g)
    n = g.nrows
    rk = [[0] * (n + 1) for _ in range(n + 2)]  # rk[i][j], 1-based, rk[n+1][*] = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            sub = Matrix.from_rows(g.field, [list(g.row(r)[:j]) for r in range(i - 1, n)])
            rk[i][j] = rref(sub).rank
    if rk[1][n] < n:
        raise NotInvertible(f"matrix of rank {rk[1][n]} < {n}")
    images = []
    for j in range(1, n + 1):
        hits = [
            i
            for i in range(1, n + 1)
            if rk[i][j] - rk[i + 1][j] - rk[i][j - 1] + rk[i + 1][j - 1] == 1
        ]
        if len(hits) != 1:
            raise ContractViolation("corner rank profile is not a permutation")
        images.append(hits[0])
    return Permutation(tuple(images))


# ---------------------------------------------------------------------------
# ULP


def _ulp_lower(m: Matrix) -> UlpFactors:
    """Unipotent-lower ULP; always exists.

    Rows are processed bottom-up.  Row i of m is peeled against the rows
    already built; the residue is supported on the columns not yet claimed,
    and its deepest nonzero column (or the deepest free column when the
    residue vanishes) becomes this row's claim.  The claims define the
    permutation; the scaled residues assemble into the unipotent lower
    factor.
    """
    f = m.field
    n = m.nrows
    zero, one = f.zero(), f.one()
    x_rows: list[list] = [None] * n  # type: ignore[list-item]
    claimed: list[int] = [0] * n  # claimed[k] = column claimed at stage k
    free = set(range(n))
    u = [[zero] * n for _ in range(n)]
    for i in range(n - 1, -1, -1):
        v = list(m.row(i))
        for k in range(n - 1, i, -1):
            coef = v[claimed[k]]
            u[i][k] = coef
            if coef != zero:
                xk = x_rows[k]
                v = [f.sub(a, f.mul(coef, b)) for a, b in zip(v, xk)]
        support = [c for c in range(n) if v[c] != zero]
        if support:
            j = max(support)
            u[i][i] = v[j]
            inv = f.inv(v[j])
            x_rows[i] = [f.mul(inv, a) for a in v]
        else:
            j = max(free)
            u[i][i] = zero
            x_rows[i] = [one if c == j else zero for c in range(n)]
        claimed[i] = j
        free.discard(j)
    images = [0] * n
    for k in range(n):
        images[claimed[k]] = k + 1
    p = Permutation(tuple(images))
    lower = [[x_rows[k][claimed[c]] for c in range(n)] for k in range(n)]
    return UlpFactors(Matrix.from_rows(f, u), Matrix.from_rows(f, lower), p, "lower")


def _ul_split(b: Matrix):
    """b = U @ L with U unipotent upper, L lower; None when impossible.

    Rows of L are forced bottom-up: L_n = B_n, and each earlier row must
    reduce, modulo the rows below it, to something supported on its leading
    columns.  Solvability of each step is independent of the choices made
    in the later ones, so a single pass decides existence.
    """
    f = b.field
    n = b.nrows
    zero, one = f.zero(), f.one()
    l_rows: list[list] = [None] * n  # type: ignore[list-item]
    u = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for i in range(n - 1, -1, -1):
        tail = n - 1 - i
        v = list(b.row(i))
        if tail:
            # coefficients t with sum_k t_k L_k matching v on columns > i
            cols = range(i + 1, n)
            a = Matrix.from_rows(f, [[l_rows[k][c] for k in range(i + 1, n)] for c in cols])
            t = solve_exact(a, [v[c] for c in cols])
            if t is None:
                return None
            for idx, k in enumerate(range(i + 1, n)):
                u[i][k] = t[idx]
                if t[idx] != zero:
                    v = [f.sub(x, f.mul(t[idx], y)) for x, y in zip(v, l_rows[k])]
        if any(v[c] != zero for c in range(i + 1, n)):
            raise ContractViolation("residual row escaped its lower support")
        l_rows[i] = v
    return Matrix.from_rows(f, u), Matrix.from_rows(f, l_rows)


def _ulp_upper(m: Matrix) -> UlpFactors:
    f = m.field
    n = m.nrows
    zero = f.zero()
    base = _ulp_lower(m)
    diag = [base.u.at(i, i) for i in range(n)]
    if all(d != zero for d in diag):
        # move the diagonal of u into l
        u = Matrix.from_rows(
            f, [[f.div(base.u.at(i, k), diag[k]) for k in range(n)] for i in range(n)]
        )
        lower = Matrix.from_rows(
            f, [[f.mul(diag[i], base.l.at(i, k)) for k in range(n)] for i in range(n)]
        )
        return UlpFactors(u, lower, base.p, "upper")
    # Singular corner: search permutations for m @ P_p^-1 = U @ L.  The
    # factorization with a unipotent upper factor does not always exist;
    # exhausting the permutations proves infeasibility exactly.
    if n > ULP_SEARCH_LIMIT:
        raise ResourceGuard(f"unipotent-upper search needs {n}! permutation trials")
    candidates = itertools.chain(
        [base.p], (Permutation(img) for img in itertools.permutations(range(1, n + 1)))
    )
    seen = set()
    for p in candidates:
        if p.images in seen:
            continue
        seen.add(p.images)
        b = m @ perm_matrix(p.inverse(), f)
        split = _ul_split(b)
        if split is not None:
            u, lower = split
            return UlpFactors(u, lower, p, "upper")
    raise UlpInfeasible("no upper*lower*permutation factorization has a unipotent upper factor")


def ulp_decompose(m: Matrix, normalization: Normalization = "lower") -> UlpFactors:
    """Factor any square m as u @ l @ P_p, u upper and l lower triangular.

    ``normalization`` names the factor forced to have an all-ones diagonal.
    The result is deterministic for a given input and normalization.
    Raises UlpInfeasible for the (singular-input, "upper") corner where the
    factorization provably does not exist.
    """
    _require_square(m)
    if normalization not in ("upper", "lower"):
        raise InvalidInput(f"unknown normalization {normalization!r}")
    factors = _ulp_lower(m) if normalization == "lower" else _ulp_upper(m)
    _validate_ulp(m, factors)
    return factors


def _validate_ulp(m: Matrix, factors: UlpFactors):
    if not factors.u.is_upper_triangular():
        raise ContractViolation("u factor is not upper triangular")
    if not factors.l.is_lower_triangular():
        raise ContractViolation("l factor is not lower triangular")
    one = m.field.one()
    named = factors.u if factors.normalization == "upper" else factors.l
    if any(named.at(i, i) != one for i in range(m.nrows)):
        raise ContractViolation("normalized factor is not unipotent")
    if factors.recompose() != m:
        raise ContractViolation("ULP recomposition failed")
