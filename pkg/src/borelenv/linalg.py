"""Exact dense linear algebra over Q and prime fields F_p.

Scalars are plain values: ``fractions.Fraction`` over Q (always in lowest
terms with positive denominator) and python ints in ``[0, p)`` over F_p.
A :class:`FieldSpec` owns the arithmetic; matrices and subspaces carry
their field and reject mixed-field operands.

Subspaces are kept in canonical form: their basis is the unique reduced
row-echelon basis, so two subspaces are equal as sets iff their bases
compare equal entry by entry.  There are no tolerances anywhere; all
comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from ._kernel import (
    _primitive as _primitive_q,
    clear_denominators,
    fracs_from_primitive,
    reduce_row_fp,
    reduce_row_q,
    rref_fp,
    rref_q_int,
    rref_rows,
)
from .errors import InvalidInput, NotInvertible, SingularSystem

__all__ = [
    "FieldSpec",
    "Matrix",
    "RrefResult",
    "Subspace",
    "rref",
    "inverse",
    "kernel",
    "solve_lower_triangular",
    "subspace_from_rows",
    "subspace_intersect",
    "subspace_sum",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: Q when ``p`` is None, else F_p for prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise InvalidInput(f"modulus {self.p} is not prime")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def is_rational(self) -> bool:
        return self.p is None

    # -- scalar arithmetic ------------------------------------------------

    def coerce(self, x):
        if self.p is None:
            if isinstance(x, bool):
                raise InvalidInput("bool is not a scalar")
            if isinstance(x, (int, Fraction)):
                return Fraction(x)
            if isinstance(x, str):
                try:
                    return Fraction(x)
                except (ValueError, ZeroDivisionError) as exc:
                    raise InvalidInput(f"bad rational literal {x!r}") from exc
            raise InvalidInput(f"cannot coerce {type(x).__name__} into Q")
        if isinstance(x, bool) or not isinstance(x, int):
            raise InvalidInput(f"cannot coerce {type(x).__name__} into F_{self.p}")
        return x % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a) if self.p is None else pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def __str__(self) -> str:
        return "Q" if self.p is None else f"F_{self.p}"


@dataclass(frozen=True)
class Matrix:
    """Immutable dense matrix with exact entries, row-major storage."""

    field: FieldSpec
    nrows: int
    ncols: int
    entries: tuple

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise InvalidInput("negative matrix dimensions")
        if len(self.entries) != self.nrows * self.ncols:
            raise InvalidInput("entry count does not match shape")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise InvalidInput("ragged rows")
        ents = tuple(field.coerce(x) for r in rows for x in r)
        return cls(field, nrows, ncols, ents)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        one, zero = field.one(), field.zero()
        ents = tuple(one if i == j else zero for i in range(n) for j in range(n))
        return cls(field, n, n, ents)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        zero = field.zero()
        return cls(field, nrows, ncols, (zero,) * (nrows * ncols))

    # -- access -----------------------------------------------------------

    def at(self, i: int, j: int):
        """Entry at 0-based position (i, j)."""
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise InvalidInput(f"index ({i}, {j}) out of range")
        return self.entries[i * self.ncols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.ncols : (i + 1) * self.ncols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.ncols + j] for i in range(self.nrows))

    def rows_list(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.nrows)]

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_upper_triangular(self) -> bool:
        zero = self.field.zero()
        return all(
            self.entries[i * self.ncols + j] == zero
            for i in range(self.nrows)
            for j in range(min(i, self.ncols))
        )

    def is_lower_triangular(self) -> bool:
        zero = self.field.zero()
        return all(
            self.entries[i * self.ncols + j] == zero
            for i in range(self.nrows)
            for j in range(i + 1, self.ncols)
        )

    # -- arithmetic -------------------------------------------------------

    def _check_same_field(self, other: "Matrix"):
        if self.field != other.field:
            raise InvalidInput(f"mixed fields {self.field} and {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise InvalidInput("shape mismatch in addition")
        add = self.field.add
        ents = tuple(add(a, b) for a, b in zip(self.entries, other.entries))
        return Matrix(self.field, self.nrows, self.ncols, ents)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        neg = self.field.neg
        return Matrix(self.field, self.nrows, self.ncols, tuple(neg(a) for a in self.entries))

    def scale(self, c) -> "Matrix":
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix(self.field, self.nrows, self.ncols, tuple(mul(c, a) for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.ncols != other.nrows:
            raise InvalidInput("shape mismatch in product")
        n, m, k = self.nrows, other.ncols, self.ncols
        a, b = self.entries, other.entries
        out = []
        if self.field.p is None:
            for i in range(n):
                base = i * k
                for j in range(m):
                    out.append(sum(a[base + t] * b[t * m + j] for t in range(k)))
        else:
            p = self.field.p
            for i in range(n):
                base = i * k
                for j in range(m):
                    out.append(sum(a[base + t] * b[t * m + j] for t in range(k)) % p)
        return Matrix(self.field, n, m, tuple(out))

    def transpose(self) -> "Matrix":
        ents = tuple(self.entries[i * self.ncols + j] for j in range(self.ncols) for i in range(self.nrows))
        return Matrix(self.field, self.ncols, self.nrows, ents)

    def flatten(self) -> tuple:
        """Row-major entry tuple; the coordinates used for gl_n subspaces."""
        return self.entries

    def __str__(self) -> str:
        rows = [" ".join(str(x) for x in self.row(i)) for i in range(self.nrows)]
        return "[" + "; ".join(rows) + "]"


class RrefResult(NamedTuple):
    reduced: Matrix
    rank: int
    pivot_cols: tuple[int, ...]


def rref(m: Matrix) -> RrefResult:
    """The unique reduced row-echelon form of m, with rank and pivots."""
    rows, rank, pivots = rref_rows(m.field, m.rows_list(), m.ncols)
    ents = tuple(x for row in rows for x in row)
    return RrefResult(Matrix(m.field, m.nrows, m.ncols, ents), rank, tuple(pivots))


def inverse(m: Matrix) -> Matrix:
    """Exact inverse of a square matrix; raises NotInvertible if singular."""
    if not m.is_square:
        raise InvalidInput("inverse of a non-square matrix")
    n = m.ncols
    one, zero = m.field.one(), m.field.zero()
    aug = [list(m.row(i)) + [one if j == i else zero for j in range(n)] for i in range(n)]
    rows, rank, pivots = rref_rows(m.field, aug, 2 * n)
    if list(pivots[:n]) != list(range(n)):
        left_rank = sum(1 for c in pivots if c < n)
        raise NotInvertible(f"matrix of rank {left_rank} < {n}")
    return Matrix.from_rows(m.field, [row[n:] for row in rows])


def kernel(m: Matrix) -> Subspace:
    """Right kernel {x : m @ x = 0} as a canonical subspace of k^ncols."""
    rows, rank, pivots = rref_rows(m.field, m.rows_list(), m.ncols)
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    zero, one = m.field.zero(), m.field.one()
    neg = m.field.neg
    basis = []
    for f in free:
        v = [zero] * m.ncols
        v[f] = one
        for t, c in enumerate(pivots):
            v[c] = neg(rows[t][f])
        basis.append(v)
    return subspace_from_rows(m.ncols, basis, field=m.field)


def solve_lower_triangular(lower: Matrix, rhs: Matrix) -> Matrix:
    """Solve lower @ x = rhs by forward substitution.

    ``lower`` must be square lower triangular; a zero diagonal entry raises
    SingularSystem.  ``rhs`` is a column matrix; the unique solution column
    is returned.
    """
    if not lower.is_square:
        raise InvalidInput("coefficient matrix must be square")
    if not lower.is_lower_triangular():
        raise InvalidInput("coefficient matrix must be lower triangular")
    n = lower.nrows
    if rhs.nrows != n or rhs.ncols != 1:
        raise InvalidInput("right-hand side must be an n x 1 column")
    lower._check_same_field(rhs)
    f = lower.field
    zero = f.zero()
    for i in range(n):
        if lower.at(i, i) == zero:
            raise SingularSystem(f"zero diagonal entry at position {i}")
    x = []
    for i in range(n):
        acc = rhs.at(i, 0)
        for k in range(i):
            acc = f.sub(acc, f.mul(lower.at(i, k), x[k]))
        x.append(f.div(acc, lower.at(i, i)))
    return Matrix(f, n, 1, tuple(x))


# ---------------------------------------------------------------------------
# Subspaces


class Subspace:
    """A linear subspace of k^d in canonical reduced-echelon basis form.

    Equality and hashing compare the canonical form entry by entry, which
    is exactly set equality of the subspaces.  Over Q the canonical basis
    is mirrored internally by primitive integer rows (content 1, positive
    pivot); the two shapes determine each other, and the integer shape is
    what intersections and span sums compute with.
    """

    __slots__ = ("ambient_dim", "field", "_prim", "_pivots", "_basis")

    def __init__(self, ambient_dim: int, field: FieldSpec, basis: Matrix):
        self.ambient_dim = ambient_dim
        self.field = field
        self._basis = basis
        pivots = []
        prim = []
        zero = field.zero()
        for i in range(basis.nrows):
            row = basis.row(i)
            piv = next(c for c in range(ambient_dim) if row[c] != zero)
            pivots.append(piv)
            if field.p is None:
                prim.append(_primitive_q(clear_denominators(row), piv))
            else:
                prim.append(tuple(int(x) for x in row))
        self._prim = tuple(prim)
        self._pivots = tuple(pivots)

    @classmethod
    def _from_prim(cls, ambient_dim: int, field: FieldSpec, prim, pivots) -> "Subspace":
        s = cls.__new__(cls)
        s.ambient_dim = ambient_dim
        s.field = field
        s._prim = tuple(tuple(r) for r in prim)
        s._pivots = tuple(pivots)
        s._basis = None
        return s

    @property
    def basis(self) -> Matrix:
        """The canonical basis matrix (materialized lazily over Q)."""
        if self._basis is None:
            if self.field.p is None:
                rows = fracs_from_primitive(self._prim, self._pivots)
            else:
                rows = self._prim
            self._basis = Matrix(
                self.field, len(rows), self.ambient_dim, tuple(x for r in rows for x in r)
            )
        return self._basis

    @property
    def dim(self) -> int:
        return len(self._prim)

    def rows(self) -> tuple:
        b = self.basis
        return tuple(b.row(i) for i in range(b.nrows))

    def prim_rows(self) -> tuple:
        """Canonical integer shape: residues over F_p, primitive rows over Q."""
        return self._prim

    def contains(self, vector: Sequence) -> bool:
        v = [self.field.coerce(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise InvalidInput("vector length does not match ambient dimension")
        if self.field.p is None:
            residue = reduce_row_q(clear_denominators(v), self._prim, self._pivots)
        else:
            residue = reduce_row_fp([int(x) for x in v], self._prim, self._pivots, self.field.p)
        return not any(residue)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.field == other.field
            and self._prim == other._prim
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.field, self._prim))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"


def _rref_prim(field: FieldSpec, rows: list, width: int):
    """(prim rows, rank, pivots) for rows already in integer shape."""
    if field.p is None:
        return rref_q_int(rows, width)
    reduced, rank, pivots = rref_fp(rows, width, field.p)
    return reduced[:rank], rank, pivots


def _to_int_rows(field: FieldSpec, rows: list) -> list:
    """Normalize arbitrary scalar rows into kernel-ready integer rows."""
    if field.p is None:
        out = []
        for r in rows:
            if any(isinstance(x, Fraction) and x.denominator != 1 for x in r):
                out.append(clear_denominators(r))
            else:
                out.append([int(x) for x in r])
        return out
    return [[int(x) for x in r] for r in rows]


def _rows_of(vectors: Iterable) -> list[list]:
    rows = []
    for v in vectors:
        if isinstance(v, Matrix):
            if v.nrows != 1:
                raise InvalidInput("expected row matrices")
            rows.append(list(v.row(0)))
        else:
            rows.append(list(v))
    return rows


def subspace_from_rows(ambient_dim: int, vectors: Iterable, field: FieldSpec | None = None) -> Subspace:
    """Canonical subspace spanned by the given row vectors.

    ``field`` may be omitted when at least one vector is a Matrix carrying
    its field; it is required for an empty generating set.
    """
    vectors = list(vectors)
    if field is None:
        for v in vectors:
            if isinstance(v, Matrix):
                field = v.field
                break
        if field is None:
            raise InvalidInput("field required when no Matrix vector is given")
    rows = _rows_of(vectors)
    for r in rows:
        if len(r) != ambient_dim:
            raise InvalidInput("vector length does not match ambient dimension")
    coerced = [[field.coerce(x) for x in r] for r in rows]
    prim, rank, pivots = _rref_prim(field, _to_int_rows(field, coerced), ambient_dim)
    return Subspace._from_prim(ambient_dim, field, prim, pivots)


def _check_compatible(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise InvalidInput("ambient dimension mismatch")
    if a.field != b.field:
        raise InvalidInput("field mismatch")


def _coordinate_subspace(ambient_dim: int, field: FieldSpec, coords) -> Subspace:
    """The span of the unit vectors at ``coords``; the sorted unit rows are
    already the canonical (and primitive) basis."""
    pivots = sorted(coords)
    prim = [tuple(1 if c == u else 0 for c in range(ambient_dim)) for u in pivots]
    return Subspace._from_prim(ambient_dim, field, prim, pivots)


def _coordinate_support(s: Subspace) -> set[int] | None:
    """If every basis row is a unit vector, the supporting coordinate set."""
    coords = set()
    for row, pc in zip(s._prim, s._pivots):
        if any(x and c != pc for c, x in enumerate(row)):
            return None
        coords.add(pc)
    return coords


def _intersect_with_coordinates(s: Subspace, coords: set[int]) -> Subspace:
    """Intersection of s with the coordinate subspace on ``coords``.

    One elimination with the complement columns ordered first: the reduced
    rows whose pivots land past the complement block are supported on
    ``coords`` and span exactly the intersection.  Because ``coords`` is
    taken in increasing order, un-permuting the surviving rows lands them
    already in canonical form.
    """
    width = s.ambient_dim
    comp = sorted(c for c in range(width) if c not in coords)
    if not comp:
        return s
    rows = s.prim_rows()
    if not rows:
        return s
    inside = sorted(coords)
    order = comp + inside
    f = s.field
    reordered = [[row[c] for c in order] for row in rows]
    prim, rank, pivots = _rref_prim(f, reordered, width)
    k = len(comp)
    out = []
    out_pivots = []
    for t, pc in enumerate(pivots):
        if pc >= k:
            vec = [0] * width
            for idx, c in enumerate(order):
                vec[c] = prim[t][idx]
            out.append(tuple(vec))
            out_pivots.append(inside[pc - k])
    return Subspace._from_prim(width, f, out, out_pivots)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Canonical intersection of two subspaces of the same ambient space."""
    _check_compatible(a, b)
    ca = _coordinate_support(a)
    cb = _coordinate_support(b)
    if ca is not None and cb is not None:
        return _coordinate_subspace(a.ambient_dim, a.field, ca & cb)
    if cb is not None:
        return _intersect_with_coordinates(a, cb)
    if ca is not None:
        return _intersect_with_coordinates(b, ca)
    # Zassenhaus: rref of [A | A; B | 0]; rows with zero left half carry the
    # intersection in their right half.
    width = a.ambient_dim
    f = a.field
    stacked = [list(r) + list(r) for r in a.prim_rows()]
    stacked += [list(r) + [0] * width for r in b.prim_rows()]
    prim, rank, _ = _rref_prim(f, stacked, 2 * width)
    out = []
    for row in prim:
        if not any(row[:width]):
            out.append(row[width:])
    final, frank, fpivots = _rref_prim(f, out, width)
    return Subspace._from_prim(width, f, final, fpivots)


def subspace_sum(parts: Sequence[Subspace]) -> Subspace:
    """Canonical span of the union of the given subspaces' bases."""
    parts = list(parts)
    if not parts:
        raise InvalidInput("subspace_sum of an empty sequence (ambient unknown)")
    first = parts[0]
    rows = []
    for s in parts:
        _check_compatible(first, s)
        rows.extend(list(r) for r in s.prim_rows())
    prim, rank, pivots = _rref_prim(first.field, rows, first.ambient_dim)
    return Subspace._from_prim(first.ambient_dim, first.field, prim, pivots)


class SpanAccumulator:
    """Incrementally growing span with canonical state; internal helper.

    Rows may be fed in public scalar form or in the integer shape; the
    accumulator keeps the canonical integer shape throughout.
    """

    __slots__ = ("ambient_dim", "field", "_prim", "_pivots")

    def __init__(self, ambient_dim: int, field: FieldSpec):
        self.ambient_dim = ambient_dim
        self.field = field
        self._prim: list = []
        self._pivots: list = []

    @property
    def dim(self) -> int:
        return len(self._prim)

    def add_rows(self, rows: Iterable) -> bool:
        new = _to_int_rows(self.field, [list(r) for r in rows])
        if not new:
            return False
        # cheap reject: reduce the incoming rows against the current basis
        # and keep only genuine enlargers before re-canonicalizing
        if self.field.p is None:
            survivors = [
                v for v in (reduce_row_q(r, self._prim, self._pivots) for r in new) if any(v)
            ]
        else:
            p = self.field.p
            survivors = [
                v
                for v in (reduce_row_fp(r, self._prim, self._pivots, p) for r in new)
                if any(v)
            ]
        if not survivors:
            return False
        stacked = [list(r) for r in self._prim] + survivors
        prim, rank, pivots = _rref_prim(self.field, stacked, self.ambient_dim)
        self._prim = [tuple(r) for r in prim]
        self._pivots = list(pivots)
        return True

    def add_row(self, row) -> bool:
        return self.add_rows([row])

    def add_subspace(self, s: Subspace) -> bool:
        return self.add_rows(s.prim_rows())

    def to_subspace(self) -> Subspace:
        return Subspace._from_prim(self.ambient_dim, self.field, self._prim, self._pivots)

    def equals(self, s: Subspace) -> bool:
        return len(self._prim) == s.dim and tuple(self._prim) == s.prim_rows()


def solve_exact(a: Matrix, b: Sequence):
    """Any exact solution x of a @ x = b, or None if inconsistent.

    Free variables are set to zero, so the result is deterministic.
    """
    f = a.field
    bb = [f.coerce(x) for x in b]
    if len(bb) != a.nrows:
        raise InvalidInput("right-hand side length mismatch")
    aug = [list(a.row(i)) + [bb[i]] for i in range(a.nrows)]
    rows, rank, pivots = rref_rows(f, aug, a.ncols + 1)
    if a.ncols in pivots:
        return None
    x = [f.zero()] * a.ncols
    for t, c in enumerate(pivots):
        x[c] = rows[t][a.ncols]
    return x
