"""Borel subalgebras of gl_n and the envelope of their Weyl intersections.

A Borel subalgebra is represented as a canonical subspace of k^(n^2) via
row-major flattening.  The conjugation convention here is

    borel(g) = { g^-1 @ M @ g : M upper triangular },

so ``borel_from_g(identity)`` is the upper triangular algebra and
``borel_from_g(P_w0)`` the lower triangular one.  (The flag module uses
the opposite stabilizer convention g @ b0 @ g^-1; the two meet through
``stabilizer_algebra(flag_from_matrix(inverse(g))) == borel_from_g(g)``.)

The central fact made executable here: every Borel subalgebra equals the
span of its intersections with the coordinate Borels borel(P_w), w in S_n,
and a certificate for that span can be produced constructively by peeling
witness matrices out of triangular data (:func:`devissage_witness`).  The
witness route needs only a small translate of the identity-plus-
transpositions subset of S_n; the brute-force route
(:func:`envelope_bruteforce`) sums the intersections directly and serves
as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from functools import cached_property, lru_cache
from typing import Sequence

from .decomp import ulp_decompose
from .errors import ContractViolation, InvalidInput, ResourceGuard
from .linalg import (
    FieldSpec,
    Matrix,
    SpanAccumulator,
    Subspace,
    inverse,
    solve_lower_triangular,
    subspace_from_rows,
    subspace_intersect,
)
from .linalg import _coordinate_subspace
from .weyl import (
    Permutation,
    compose,
    enumerate_group,
    longest_element,
    perm_matrix,
    transposition_set,
)

__all__ = [
    "BorelConjugate",
    "DevissageWitness",
    "EnvelopeCertificate",
    "borel_from_g",
    "borel_translate",
    "borel_intersection_dim",
    "devissage_witness",
    "witness_basis",
    "envelope_certificate",
    "envelope_bruteforce",
    "verify_certificate",
]

FULL_GROUP_LIMIT = 6
RESTRICTED_LIMIT = 12


def upper_pairs(n: int) -> list[tuple[int, int]]:
    """1-based (row, col) pairs with row <= col, in lexicographic order."""
    return [(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]


def lower_pairs(n: int) -> list[tuple[int, int]]:
    """1-based (row, col) pairs with row >= col, in lexicographic order."""
    return [(i, j) for i in range(1, n + 1) for j in range(1, i + 1)]


def _flat(n: int, i: int, j: int) -> int:
    """Row-major coordinate of the (i, j) entry, 1-based in, 0-based out."""
    return (i - 1) * n + (j - 1)


class BorelConjugate:
    """The Borel subalgebra g^-1 @ uppers @ g for a fixed invertible g.

    The subspace itself is computed lazily and cached; the defining matrix
    is validated eagerly.
    """

    def __init__(self, g: Matrix):
        if not g.is_square:
            raise InvalidInput("conjugating matrix must be square")
        self.g = g
        self.n = g.nrows
        self.g_inv = inverse(g)  # raises NotInvertible for singular input

    @cached_property
    def algebra(self) -> Subspace:
        n, f = self.n, self.g.field
        rows = []
        for a, b in upper_pairs(n):
            col = self.g_inv.col(a - 1)
            row = self.g.row(b - 1)
            conj = [f.mul(col[r], row[c]) for r in range(n) for c in range(n)]
            rows.append(conj)
        space = subspace_from_rows(n * n, rows, field=f)
        if space.dim != n * (n + 1) // 2:
            raise ContractViolation("conjugated Borel has wrong dimension")
        return space


def borel_from_g(g: Matrix) -> BorelConjugate:
    """The subspace {g^-1 @ M @ g : M upper triangular} of k^(n^2)."""
    return BorelConjugate(g)


@lru_cache(maxsize=65536)
def borel_translate(w: Permutation, field: FieldSpec) -> Subspace:
    """borel(P_w): the coordinate subspace on entries (w^-1(a), w^-1(b)), a <= b."""
    n = w.n
    winv = w.inverse()
    coords = [_flat(n, winv(a), winv(b)) for a, b in upper_pairs(n)]
    return _coordinate_subspace(n * n, field, coords)


def borel_intersection_dim(w1: Permutation, w2: Permutation, field: FieldSpec | None = None) -> int:
    """dim(borel(P_w1) ∩ borel(P_w2)); field defaults to Q."""
    if w1.n != w2.n:
        raise InvalidInput("size mismatch")
    f = field or FieldSpec.rational()
    return subspace_intersect(borel_translate(w1, f), borel_translate(w2, f)).dim


# ---------------------------------------------------------------------------
# Devissage


@dataclass(frozen=True)
class DevissageWitness:
    """One peeled basis matrix of the lower triangular Borel.

    ``a`` is supported in row i on columns j..i with a leading 1 in column
    j; it lies in the lower triangular algebra and in borel(P_s @ u^-1) for
    the u it was built from, s the (i, j)-transposition.
    """

    i: int
    j: int
    x: tuple
    a: Matrix
    s: Permutation


def _require_upper_invertible(u: Matrix):
    if not u.is_square:
        raise InvalidInput("u must be square")
    if not u.is_upper_triangular():
        raise InvalidInput("u must be upper triangular")
    zero = u.field.zero()
    if any(u.at(t, t) == zero for t in range(u.nrows)):
        raise InvalidInput("u must have a nonzero diagonal")


def _conjugate_row_support(left: Matrix, right: Matrix, i: int, row_vals) -> list:
    """left @ a @ right for a supported on row i only (1-based), as rows.

    Such an a is rank one, so the product is the outer product of left's
    column i with (row of a) @ right: quadratic instead of cubic work.
    """
    f = left.field
    n = left.nrows
    zero = f.zero()
    rowv = []
    for j in range(n):
        acc = zero
        for c, val in row_vals:
            if val != zero:
                acc = f.add(acc, f.mul(val, right.at(c, j)))
        rowv.append(acc)
    col = left.col(i - 1)
    return [[f.mul(col[r], rowv[c]) for c in range(n)] for r in range(n)]


def devissage_witness(u: Matrix, i: int, j: int, _u_inv: Matrix | None = None) -> DevissageWitness:
    """Solve the peeling system for the (i, j) witness, 1-based, i >= j.

    The coefficients x are the unique solution of a lower triangular system
    of size i - j built from the entries of u; the witness matrix is
    e^{i,j} + sum_l x_l e^{i,l}.  Membership in borel(P_s @ u^-1) is not
    assumed: it is checked by explicit conjugation, and a failure raises
    ContractViolation (that would be a bug, not bad input).
    """
    _require_upper_invertible(u)
    n = u.nrows
    if not (1 <= j <= i <= n):
        raise InvalidInput(f"need 1 <= j <= i <= n, got (i, j) = ({i}, {j})")
    f = u.field
    size = i - j
    if size:
        sys_rows = [
            [u.at(j + c - 1, j + r - 1) if c <= r else f.zero() for c in range(1, size + 1)]
            for r in range(1, size + 1)
        ]
        rhs = [[f.neg(u.at(j - 1, j + r - 1))] for r in range(1, size + 1)]
        sol = solve_lower_triangular(
            Matrix.from_rows(f, sys_rows), Matrix.from_rows(f, rhs)
        )
        x = sol.col(0)
    else:
        x = ()
    ents = [f.zero()] * (n * n)
    ents[_flat(n, i, j)] = f.one()
    for offset, val in enumerate(x, start=1):
        ents[_flat(n, i, j + offset)] = val
    a = Matrix(f, n, n, tuple(ents))
    s = Permutation.transposition(n, i, j) if i != j else Permutation.identity(n)
    u_inv = _u_inv if _u_inv is not None else inverse(u)
    row_vals = [(j - 1, f.one())] + [(j + off - 1, val) for off, val in enumerate(x, start=1)]
    conj = _conjugate_row_support(u_inv, u, i, row_vals)
    zero = f.zero()
    # conjugating by P_s permutes indices; check upper-triangularity of
    # the permuted matrix without building it
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            if s(r) > s(c) and conj[r - 1][c - 1] != zero:
                raise ContractViolation(f"witness ({i}, {j}) escaped its Borel")
    return DevissageWitness(i, j, tuple(x), a, s)


def witness_basis(u: Matrix) -> tuple[DevissageWitness, ...]:
    """All n(n+1)/2 witnesses for u, ordered lexicographically by (i, j).

    Their matrices form a basis of the lower triangular algebra, and the
    change of basis from the elementary matrices is unipotent triangular.
    """
    _require_upper_invertible(u)
    u_inv = inverse(u)
    return tuple(
        devissage_witness(u, i, j, _u_inv=u_inv) for i, j in lower_pairs(u.nrows)
    )


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class EnvelopeCertificate:
    """Machine-checkable witness that tagged vectors span a Borel.

    Every entry is a flattened gl_n vector together with the Weyl element w
    whose translate borel(P_w) contains it; ``spans`` records whether the
    entries span the whole target algebra.
    """

    target: BorelConjugate
    entries: tuple  # of (vector tuple, Permutation)
    spans: bool

    witness_set: tuple = dataclass_field(default=())

    def tags(self) -> tuple[Permutation, ...]:
        seen = []
        for _, w in self.entries:
            if w not in seen:
                seen.append(w)
        return tuple(seen)


def verify_certificate(cert: EnvelopeCertificate) -> bool:
    """Recheck every claim in the certificate from scratch.

    Each vector must lie in the target algebra and in its tagged translate,
    and ``spans`` must agree with a direct comparison of the entries' span
    against the target.  Membership failures return False rather than
    raising, so forged certificates are rejected, not crashed on.
    """
    target = cert.target
    n = target.n
    f = target.g.field
    algebra = target.algebra
    for vec, w in cert.entries:
        if len(vec) != n * n:
            return False
        if not algebra.contains(vec):
            return False
        if not borel_translate(w, f).contains(vec):
            return False
    span = subspace_from_rows(n * n, [list(v) for v, _ in cert.entries], field=f)
    return cert.spans == (span == algebra)


def _dedup(ws: Sequence[Permutation]) -> list[Permutation]:
    seen = set()
    out = []
    for w in ws:
        if w.images not in seen:
            seen.add(w.images)
            out.append(w)
    return out


def _certificate_greedy(target: BorelConjugate, ws: Sequence[Permutation]) -> EnvelopeCertificate:
    n, f = target.n, target.g.field
    algebra = target.algebra
    acc = SpanAccumulator(n * n, f)
    entries = []
    for w in ws:
        if w.n != n:
            raise InvalidInput("weyl_set size does not match the matrix")
        inter = subspace_intersect(algebra, borel_translate(w, f))
        for row in inter.rows():
            if acc.add_row(row):
                entries.append((tuple(row), w))
    spans = acc.equals(algebra)
    return EnvelopeCertificate(target, tuple(entries), spans, tuple(ws))


def _certificate_devissage(target: BorelConjugate) -> EnvelopeCertificate:
    g = target.g
    n, f = target.n, g.field
    factors = ulp_decompose(g, "lower")
    w0 = longest_element(n)
    pw0 = perm_matrix(w0, f)
    u2 = pw0 @ factors.l @ pw0
    if not u2.is_upper_triangular():
        raise ContractViolation("conjugated lower factor is not upper triangular")
    q = compose(w0, factors.p)
    right = u2 @ perm_matrix(q, f)
    left = inverse(right)
    entries = []
    for wit in witness_basis(u2):
        row_vals = [(c, wit.a.at(wit.i - 1, c)) for c in range(n)]
        conj = _conjugate_row_support(left, right, wit.i, row_vals)
        vec = tuple(x for r in conj for x in r)
        entries.append((vec, compose(wit.s, q)))
    span = subspace_from_rows(n * n, [list(v) for v, _ in entries], field=f)
    spans = span == target.algebra
    translate = tuple(compose(t, q) for t in transposition_set(n))
    cert = EnvelopeCertificate(target, tuple(entries), spans, translate)
    if not verify_certificate(cert):
        raise ContractViolation("devissage certificate failed self-verification")
    return cert


def envelope_certificate(
    g: Matrix,
    weyl_set: Sequence[Permutation] | None = None,
    *,
    restricted: bool = False,
) -> EnvelopeCertificate:
    """Produce a certificate that borel(g) is spanned by tagged vectors.

    With ``restricted=True`` the construction follows the witness route:
    factor g, peel the witness basis, and conjugate it into borel(g); the
    tags then lie in a single translate of the identity-plus-transpositions
    subset, and the certificate always spans.  Otherwise intersections with
    the translates in ``weyl_set`` (default: all of S_n, guarded at n <= 6)
    are accumulated greedily; a too-small caller-supplied set yields
    ``spans=False``, which is informative output rather than an error.
    """
    target = borel_from_g(g)
    if restricted:
        if weyl_set is not None:
            raise InvalidInput("restricted mode computes its own translate")
        if target.n > RESTRICTED_LIMIT:
            raise ResourceGuard(f"restricted certificates guarded at n <= {RESTRICTED_LIMIT}")
        return _certificate_devissage(target)
    if weyl_set is None:
        if target.n > FULL_GROUP_LIMIT:
            raise ResourceGuard(f"full-group certificates guarded at n <= {FULL_GROUP_LIMIT}")
        ws = list(enumerate_group(target.n))
    else:
        ws = _dedup(weyl_set)
    return _certificate_greedy(target, ws)


def envelope_bruteforce(g: Matrix, weyl_set: Sequence[Permutation]) -> Subspace:
    """Sum of the intersections borel(g) ∩ borel(P_w) over the given set.

    The independent oracle: no witness machinery, just subspace
    intersections accumulated into a span.  Accumulation stops early once
    the span reaches the whole of borel(g); every remaining term is an
    intersection with borel(g) and cannot grow the sum further.
    """
    target = borel_from_g(g)
    n, f = target.n, g.field
    if n > FULL_GROUP_LIMIT:
        raise ResourceGuard(f"envelope_bruteforce guarded at n <= {FULL_GROUP_LIMIT}")
    algebra = target.algebra
    acc = SpanAccumulator(n * n, f)
    for w in _dedup(weyl_set):
        if w.n != n:
            raise InvalidInput("weyl_set size does not match the matrix")
        inter = subspace_intersect(algebra, borel_translate(w, f))
        acc.add_subspace(inter)
        if acc.dim == algebra.dim and acc.equals(algebra):
            break
    return acc.to_subspace()
