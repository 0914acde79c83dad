"""Complete flags, relative position, and tangent spaces of the incidence
variety of (matrix, flag) pairs.

A complete flag in k^n is the chain of spans of the leading columns of an
invertible matrix; flags compare equal exactly when all their canonical
step subspaces do, so the adapted basis is a representative, not an
identity.

Stabilizer convention: ``stabilizer_algebra(flag_from_matrix(g))`` equals
g @ b0 @ g^-1 for b0 the upper triangular algebra.  This is the opposite
conjugation direction from :mod:`borelenv.envelope` (which uses
g^-1 @ b0 @ g); the bridge identity is

    stabilizer_algebra(flag_from_matrix(inverse(g))) == borel_from_g(g).algebra

and both directions are kept deliberately, each in its home module.

Tangent spaces are coordinatized concretely.  The tangent space of the
flag variety at any point is identified with the strictly lower triangular
matrices (the unipotent-opposite chart through that point), giving
n(n-1)/2 chart coordinates ordered lexicographically by (row, col) with
row > col.  The tangent space of the incidence variety at a point (0, F)
is then stab(F) ⊕ chart inside k^(n^2) ⊕ k^(n(n-1)/2), and the fiber
square over 0 has tangent chart ⊕ (stab ∩ stab) ⊕ chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .errors import ContractViolation, InvalidInput, ResourceGuard
from .linalg import (
    FieldSpec,
    Matrix,
    SpanAccumulator,
    Subspace,
    inverse,
    kernel,
    rref,
    subspace_from_rows,
    subspace_intersect,
)
from .weyl import Permutation, enumerate_group, perm_matrix

__all__ = [
    "Flag",
    "TangentSpaceGtilde",
    "TangentSpaceFiber",
    "flag_from_matrix",
    "stabilizer_algebra",
    "relative_position",
    "torus_fixed_flags",
    "tangent_gtilde",
    "tangent_fiber",
    "dpi2",
    "tangent_sum_check",
]

TANGENT_SUM_LIMIT = 6
FLAG_ENUMERATION_LIMIT = 8


def chart_pairs(n: int) -> list[tuple[int, int]]:
    """1-based strictly-lower (row, col) pairs in lexicographic order."""
    return [(i, j) for i in range(2, n + 1) for j in range(1, i)]


def chart_dim(n: int) -> int:
    return n * (n - 1) // 2


class Flag:
    """A complete flag, held as an adapted basis plus canonical steps."""

    def __init__(self, adapted_basis: Matrix):
        if not adapted_basis.is_square:
            raise InvalidInput("adapted basis must be square")
        self.adapted_basis = adapted_basis
        self.n = adapted_basis.nrows
        self.field = adapted_basis.field
        inverse(adapted_basis)  # raises NotInvertible when degenerate

    @cached_property
    def steps(self) -> tuple[Subspace, ...]:
        """F_1 ⊂ ... ⊂ F_n, F_i the span of the first i columns."""
        cols = [self.adapted_basis.col(j) for j in range(self.n)]
        return tuple(
            subspace_from_rows(self.n, cols[:i], field=self.field)
            for i in range(1, self.n + 1)
        )

    def __eq__(self, other):
        if not isinstance(other, Flag):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.steps == other.steps

    def __hash__(self):
        return hash((self.n, self.field, self.steps))

    def __repr__(self):
        return f"Flag(n={self.n}, field={self.field})"


def flag_from_matrix(g: Matrix) -> Flag:
    """The flag of leading-column spans of invertible g."""
    return Flag(g)


@lru_cache(maxsize=4096)
def stabilizer_algebra(f: Flag) -> Subspace:
    """{M in gl_n : M F_i ⊆ F_i for all i}, as a subspace of k^(n^2).

    Solved directly from the linear stability conditions (the conjugation
    formula g @ b0 @ g^-1 is kept as an independent oracle in the tests).
    Cached: the coordinate flags recur in every tangent computation.
    """
    n = f.n
    fld = f.field
    constraints = []
    for i in range(n - 1):  # F_n imposes nothing
        step = f.steps[i]
        annihilator = kernel(step.basis)
        for v in step.rows():
            for z in annihilator.rows():
                # (M v) . z = 0  <=>  sum_{r,c} z_r v_c M[r][c] = 0
                row = [fld.mul(z[r], v[c]) for r in range(n) for c in range(n)]
                constraints.append(row)
    if not constraints:
        return subspace_from_rows(
            n * n,
            [[fld.one() if t == s else fld.zero() for t in range(n * n)] for s in range(n * n)],
            field=fld,
        )
    return kernel(Matrix.from_rows(fld, constraints))


def relative_position(f1: Flag, f2: Flag) -> Permutation:
    """The unique w with f2 in the f1-Borel orbit through w's coordinate flag.

    Computed from the rank table r(i, j) = dim(F1_i ∩ F2_j): w(j) is the
    unique i where the second difference of r equals 1.
    """
    if f1.n != f2.n or f1.field != f2.field:
        raise InvalidInput("flags live in different spaces")
    n = f1.n
    fld = f1.field
    r = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        rows_i = [list(v) for v in f1.steps[i - 1].rows()]
        for j in range(1, n + 1):
            stacked = rows_i + [list(v) for v in f2.steps[j - 1].rows()]
            joint = rref(Matrix.from_rows(fld, stacked)).rank
            r[i][j] = i + j - joint
    images = []
    for j in range(1, n + 1):
        hits = [
            i
            for i in range(1, n + 1)
            if r[i][j] - r[i - 1][j] - r[i][j - 1] + r[i - 1][j - 1] == 1
        ]
        if len(hits) != 1:
            raise ContractViolation("rank table is not a permutation profile")
        images.append(hits[0])
    return Permutation(tuple(images))


def torus_fixed_flags(n: int, field: FieldSpec) -> tuple[Flag, ...]:
    """The n! coordinate flags: exactly the flags fixed by the diagonal torus."""
    if n > FLAG_ENUMERATION_LIMIT:
        raise ResourceGuard(f"flag enumeration guarded at n <= {FLAG_ENUMERATION_LIMIT}")
    return tuple(flag_from_matrix(perm_matrix(w, field)) for w in enumerate_group(n))


# ---------------------------------------------------------------------------
# Tangent spaces


@dataclass(frozen=True)
class TangentSpaceGtilde:
    """Tangent space of the incidence variety at (0, base_flag).

    Lives in k^(n^2) ⊕ chart; equals stab(base_flag) ⊕ (full chart), so its
    dimension is always n^2.
    """

    base_flag: Flag
    space: Subspace


@dataclass(frozen=True)
class TangentSpaceFiber:
    """Tangent space of the fiber square at ((flag1, 0, flag2)).

    Lives in chart ⊕ k^(n^2) ⊕ chart; equals
    chart ⊕ (stab(flag1) ∩ stab(flag2)) ⊕ chart.
    """

    flags: tuple[Flag, Flag]
    space: Subspace


def _block_diag_space(fld: FieldSpec, blocks) -> Subspace:
    """Canonical subspace from block-supported canonical pieces.

    ``blocks`` is a list of (offset, width, subspace_or_None); None means
    the full block.  Offsets are increasing and non-overlapping, so padding
    each piece's canonical rows into the total width is again canonical.
    """
    total = sum(w for _, w, _ in blocks)
    prim = []
    pivots = []
    for offset, width, piece in blocks:
        if piece is None:
            for t in range(width):
                row = [0] * total
                row[offset + t] = 1
                prim.append(tuple(row))
                pivots.append(offset + t)
        else:
            for r, pc in zip(piece.prim_rows(), piece._pivots):
                row = [0] * total
                row[offset : offset + width] = list(r)
                prim.append(tuple(row))
                pivots.append(offset + pc)
    order = sorted(range(len(prim)), key=lambda t: pivots[t])
    return Subspace._from_prim(total, fld, [prim[t] for t in order], [pivots[t] for t in order])


def tangent_gtilde(f: Flag) -> TangentSpaceGtilde:
    n, fld = f.n, f.field
    cd = chart_dim(n)
    space = _block_diag_space(fld, [(0, n * n, stabilizer_algebra(f)), (n * n, cd, None)])
    if space.dim != n * n:
        raise ContractViolation("tangent space has wrong dimension")
    return TangentSpaceGtilde(f, space)


def tangent_fiber(f1: Flag, f2: Flag) -> TangentSpaceFiber:
    if f1.n != f2.n or f1.field != f2.field:
        raise InvalidInput("flags live in different spaces")
    n, fld = f1.n, f1.field
    cd = chart_dim(n)
    mid = subspace_intersect(stabilizer_algebra(f1), stabilizer_algebra(f2))
    space = _block_diag_space(
        fld, [(0, cd, None), (cd, n * n, mid), (cd + n * n, cd, None)]
    )
    return TangentSpaceFiber((f1, f2), space)


def dpi2(t: TangentSpaceFiber) -> Subspace:
    """Project the fiber tangent space onto the (gl_n ⊕ second chart) block.

    The first-chart rows of the canonical basis project to zero and every
    other row keeps its support, so dropping the leading block of each
    surviving row is already canonical.
    """
    n = t.flags[0].n
    cd = chart_dim(n)
    fld = t.flags[0].field
    prim = []
    pivots = []
    for r, pc in zip(t.space.prim_rows(), t.space._pivots):
        if pc >= cd:
            if any(r[:cd]):
                # not block-shaped (hand-built fiber): project generically
                rows = [list(row)[cd:] for row in t.space.rows()]
                return subspace_from_rows(n * n + cd, rows, field=fld)
            prim.append(tuple(r[cd:]))
            pivots.append(pc - cd)
    return Subspace._from_prim(n * n + cd, fld, prim, pivots)


def _tangent_sum(h: Matrix):
    """(holds, ledger, summed subspace) over all coordinate flags."""
    if not h.is_square:
        raise InvalidInput("square matrix required")
    n = h.nrows
    if n > TANGENT_SUM_LIMIT:
        raise ResourceGuard(f"tangent sum guarded at n <= {TANGENT_SUM_LIMIT}")
    fld = h.field
    fh = flag_from_matrix(h)
    target = tangent_gtilde(fh).space
    acc = SpanAccumulator(target.ambient_dim, fld)
    ledger = []
    for w in enumerate_group(n):
        fw = flag_from_matrix(perm_matrix(w, fld))
        fiber = tangent_fiber(fw, fh)
        mid_dim = fiber.space.dim - 2 * chart_dim(n)
        ledger.append((w, mid_dim))
        acc.add_rows(dpi2(fiber).rows())
    total = acc.to_subspace()
    return total == target, tuple(ledger), total


def tangent_sum_check(h: Matrix):
    """Check that the projected fiber tangents over all coordinate flags sum
    to the full tangent space at (0, flag(h)).

    Returns ``(holds, ledger)`` where the ledger lists, for each w in S_n in
    enumeration order, the dimension of stab(coordinate flag of w) ∩
    stab(flag(h)).  ``holds`` is True for every invertible h; False would
    indicate an implementation bug, and callers treat it as such.
    """
    holds, ledger, _ = _tangent_sum(h)
    return holds, ledger
