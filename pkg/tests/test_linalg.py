"""Exact-kernel tests: scalars, rref, triangular solves, subspaces."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from borelenv.errors import InvalidInput, NotInvertible, SingularSystem
from borelenv.linalg import (
    FieldSpec,
    Matrix,
    SpanAccumulator,
    inverse,
    kernel,
    rref,
    solve_lower_triangular,
    subspace_from_rows,
    subspace_intersect,
    subspace_sum,
)
from borelenv.rng import SplitMix64, random_invertible, random_matrix

from reference import naive_rref_fp, naive_rref_q, rank_by_minors

Q = FieldSpec.rational()
F2 = FieldSpec.prime(2)
F5 = FieldSpec.prime(5)

FIELDS = [Q, F2, F5, FieldSpec.prime(101)]


class TestFieldSpec:
    def test_prime_modulus_checked(self):
        with pytest.raises(InvalidInput):
            FieldSpec.prime(6)
        with pytest.raises(InvalidInput):
            FieldSpec.prime(1)
        FieldSpec.prime(2)
        FieldSpec.prime(97)

    def test_rational_coercion_canonical(self):
        x = Q.coerce("-4/6")
        assert x == Fraction(-2, 3)
        assert x.denominator == 3  # positive denominator, lowest terms

    def test_fp_residue_range(self):
        assert F5.coerce(-3) == 2
        assert F5.coerce(12) == 2
        with pytest.raises(InvalidInput):
            F5.coerce("3")

    def test_field_axioms_seeded(self):
        # a thousand random triples per field, checked exactly
        for field in FIELDS:
            rng = SplitMix64(2024)
            for _ in range(1000):
                if field.p is None:
                    a, b, c = (Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(3))
                else:
                    a, b, c = (rng.below(field.p) for _ in range(3))
                assert field.add(a, b) == field.add(b, a)
                assert field.mul(a, b) == field.mul(b, a)
                assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
                assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
                assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
                if a != field.zero():
                    assert field.mul(a, field.inv(a)) == field.one()


class TestRref:
    def test_identity(self):
        m = Matrix.identity(Q, 3)
        res = rref(m)
        assert res.reduced == m
        assert res.rank == 3
        assert res.pivot_cols == (0, 1, 2)

    def test_zero(self):
        m = Matrix.zeros(F5, 2, 2)
        res = rref(m)
        assert res.reduced == m and res.rank == 0 and res.pivot_cols == ()

    def test_rank_one_example(self):
        m = Matrix.from_rows(Q, [[2, 4], [1, 2]])
        res = rref(m)
        assert res.reduced == Matrix.from_rows(Q, [[1, 2], [0, 0]])
        assert res.rank == 1
        assert res.pivot_cols == (0,)
        assert rank_by_minors([[2, 4], [1, 2]]) == 1

    def test_idempotent(self):
        rng = SplitMix64(7)
        for field in FIELDS:
            for _ in range(25):
                m = random_matrix(rng, field, 4)
                once = rref(m).reduced
                assert rref(once).reduced == once

    def test_matches_naive_reference_bitwise(self):
        rng = SplitMix64(99)
        for _ in range(150):
            nr = 1 + rng.below(5)
            nc = 1 + rng.below(6)
            rows = [[rng.randint(-9, 9) for _ in range(nc)] for _ in range(nr)]
            got = rref(Matrix.from_rows(Q, rows))
            ref_rows, ref_rank, ref_piv = naive_rref_q(rows)
            assert got.reduced.rows_list() == [list(r) for r in ref_rows]
            assert got.rank == ref_rank and list(got.pivot_cols) == ref_piv
            for p in (2, 5, 101):
                f = FieldSpec.prime(p)
                gotp = rref(Matrix.from_rows(f, [[x % p for x in r] for r in rows]))
                refp_rows, refp_rank, refp_piv = naive_rref_fp(rows, p)
                assert gotp.reduced.rows_list() == [list(r) for r in refp_rows]
                assert gotp.rank == refp_rank and list(gotp.pivot_cols) == refp_piv

    def test_fraction_inputs(self):
        m = Matrix.from_rows(Q, [["1/2", "1/3"], ["1/4", "1/6"]])
        assert rref(m).rank == 1

    def test_mixed_field_rejected(self):
        a = Matrix.identity(Q, 2)
        b = Matrix.identity(F5, 2)
        with pytest.raises(InvalidInput):
            a @ b


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=3, max_size=3),
        min_size=1,
        max_size=5,
    )
)
def test_rref_idempotence_property(rows):
    m = Matrix.from_rows(Q, rows)
    reduced = rref(m).reduced
    assert rref(reduced).reduced == reduced


class TestSolveLowerTriangular:
    def test_scalar(self):
        lower = Matrix.from_rows(Q, [[1]])
        rhs = Matrix.from_rows(Q, [[-1]])
        assert solve_lower_triangular(lower, rhs) == rhs

    def test_identity_returns_rhs(self):
        lower = Matrix.identity(F5, 3)
        rhs = Matrix.from_rows(F5, [[1], [2], [4]])
        assert solve_lower_triangular(lower, rhs) == rhs

    def test_worked_example(self):
        lower = Matrix.from_rows(Q, [[2, 0], [1, 3]])
        rhs = Matrix.from_rows(Q, [[4], [5]])
        x = solve_lower_triangular(lower, rhs)
        assert x == Matrix.from_rows(Q, [[2], [1]])
        assert lower @ x == rhs

    def test_substitution_reproduces_rhs(self):
        rng = SplitMix64(5)
        for field in FIELDS:
            for _ in range(30):
                n = 1 + rng.below(5)
                rows = []
                for i in range(n):
                    row = [field.coerce(rng.randint(-9, 9)) if j < i else field.zero() for j in range(n)]
                    d = rng.randint(1, 9) if field.p is None else 1 + rng.below(field.p - 1)
                    row[i] = field.coerce(d)
                    rows.append(row)
                lower = Matrix.from_rows(field, rows)
                rhs = Matrix.from_rows(field, [[rng.randint(-9, 9) if field.p is None else rng.below(field.p)] for _ in range(n)])
                assert lower @ solve_lower_triangular(lower, rhs) == rhs

    def test_zero_diagonal_raises(self):
        lower = Matrix.from_rows(Q, [[0, 0], [1, 3]])
        with pytest.raises(SingularSystem):
            solve_lower_triangular(lower, Matrix.from_rows(Q, [[1], [1]]))

    def test_not_lower_rejected(self):
        m = Matrix.from_rows(Q, [[1, 1], [0, 1]])
        with pytest.raises(InvalidInput):
            solve_lower_triangular(m, Matrix.from_rows(Q, [[1], [1]]))


class TestInverse:
    def test_examples(self):
        assert inverse(Matrix.identity(Q, 3)) == Matrix.identity(Q, 3)
        u = Matrix.from_rows(Q, [[1, 1], [0, 1]])
        assert inverse(u) == Matrix.from_rows(Q, [[1, -1], [0, 1]])
        s = Matrix.from_rows(F5, [[0, 1], [1, 0]])
        assert inverse(s) == s

    def test_roundtrip(self):
        rng = SplitMix64(11)
        for field in FIELDS:
            for _ in range(20):
                n = 1 + rng.below(4)
                m = random_invertible(rng, field, n)
                assert m @ inverse(m) == Matrix.identity(field, n)

    def test_singular_raises(self):
        with pytest.raises(NotInvertible):
            inverse(Matrix.zeros(Q, 2, 2))
        with pytest.raises(NotInvertible):
            inverse(Matrix.from_rows(F2, [[1, 1], [1, 1]]))


class TestSubspace:
    def test_full_plane(self):
        s = subspace_from_rows(2, [[1, 0], [0, 1]], field=Q)
        assert s.dim == 2

    def test_collinear(self):
        s = subspace_from_rows(2, [[1, 1], [2, 2]], field=Q)
        assert s.dim == 1
        assert s.basis == Matrix.from_rows(Q, [[1, 1]])

    def test_empty(self):
        s = subspace_from_rows(3, [], field=F5)
        assert s.dim == 0

    def test_canonicality_under_remixing(self):
        # two random invertible remixes of the same generators agree bitwise
        rng = SplitMix64(13)
        for field in FIELDS:
            for _ in range(25):
                n = 3 + rng.below(3)
                k = 1 + rng.below(n)
                gens = [[field.coerce(rng.randint(-9, 9)) if field.p is None else rng.below(field.p) for _ in range(n)] for _ in range(k)]
                base = subspace_from_rows(n, gens, field=field)
                mix = random_invertible(rng, field, k)
                mixed = (mix @ Matrix.from_rows(field, gens)).rows_list()
                assert subspace_from_rows(n, mixed, field=field) == base

    def test_grassmann_identity(self):
        rng = SplitMix64(17)
        for field in FIELDS:
            for _ in range(30):
                n = 2 + rng.below(4)
                mk = lambda: subspace_from_rows(
                    n,
                    [[field.coerce(rng.randint(-9, 9)) if field.p is None else rng.below(field.p) for _ in range(n)]
                     for _ in range(1 + rng.below(n))],
                    field=field,
                )
                a, b = mk(), mk()
                inter = subspace_intersect(a, b)
                total = subspace_sum([a, b])
                assert a.dim + b.dim == inter.dim + total.dim

    def test_intersect_idempotent(self):
        s = subspace_from_rows(3, [[1, 2, 0], [0, 0, 1]], field=Q)
        assert subspace_intersect(s, s) == s

    def test_axes(self):
        e1 = subspace_from_rows(2, [[1, 0]], field=Q)
        e2 = subspace_from_rows(2, [[0, 1]], field=Q)
        assert subspace_intersect(e1, e2).dim == 0
        assert subspace_sum([e1, e2]).dim == 2

    def test_sum_of_single(self):
        s = subspace_from_rows(3, [[1, 1, 1]], field=F2)
        assert subspace_sum([s]) == s

    def test_contains(self):
        s = subspace_from_rows(3, [[1, 0, 2], [0, 1, 1]], field=Q)
        assert s.contains([1, 1, 3])
        assert not s.contains([0, 0, 1])
        assert s.contains([Fraction(1, 2), 0, 1])

    def test_basis_structural_invariants(self):
        # nonzero rows, unit pivots on strictly increasing columns, pivot
        # columns cleared everywhere else
        rng = SplitMix64(41)
        for field in FIELDS:
            for _ in range(15):
                n = 3 + rng.below(4)
                s = subspace_from_rows(
                    n,
                    [[field.coerce(rng.randint(-9, 9)) if field.p is None else rng.below(field.p) for _ in range(n)]
                     for _ in range(1 + rng.below(n))],
                    field=field,
                )
                b = s.basis
                zero, one = field.zero(), field.one()
                pivots = []
                for i in range(b.nrows):
                    row = b.row(i)
                    nz = [c for c, x in enumerate(row) if x != zero]
                    assert nz
                    assert row[nz[0]] == one
                    pivots.append(nz[0])
                    for i2 in range(b.nrows):
                        if i2 != i:
                            assert b.at(i2, nz[0]) == zero
                assert pivots == sorted(set(pivots))

    def test_intersect_matches_zassenhaus_both_ways(self):
        # the coordinate fast path and the general path agree
        rng = SplitMix64(23)
        for field in (Q, F5):
            for _ in range(20):
                n = 4 + rng.below(3)
                coords = {c for c in range(n) if rng.below(2)}
                one, zero = field.one(), field.zero()
                coord_rows = [[one if c == u else zero for c in range(n)] for u in sorted(coords)]
                a = subspace_from_rows(
                    n,
                    [[field.coerce(rng.randint(-9, 9)) if field.p is None else rng.below(field.p) for _ in range(n)]
                     for _ in range(3)],
                    field=field,
                )
                b = subspace_from_rows(n, coord_rows, field=field)
                fast = subspace_intersect(a, b)
                # force the general path by perturbing b's basis away from
                # unit rows while keeping the same subspace, when possible
                assert fast.dim + subspace_sum([a, b]).dim == a.dim + b.dim
                for row in fast.rows():
                    assert a.contains(row) and b.contains(row)

    def test_ambient_mismatch(self):
        a = subspace_from_rows(2, [[1, 0]], field=Q)
        b = subspace_from_rows(3, [[1, 0, 0]], field=Q)
        with pytest.raises(InvalidInput):
            subspace_intersect(a, b)


class TestKernel:
    def test_kernel_basic(self):
        m = Matrix.from_rows(Q, [[1, 1]])
        k = kernel(m)
        assert k.dim == 1
        assert k.basis == Matrix.from_rows(Q, [[1, -1]])

    def test_kernel_orthogonality(self):
        rng = SplitMix64(31)
        for field in FIELDS:
            for _ in range(15):
                m = random_matrix(rng, field, 4)
                k = kernel(m)
                assert k.dim == 4 - rref(m).rank
                for v in k.rows():
                    prod = m @ Matrix(field, 4, 1, tuple(v))
                    assert prod == Matrix.zeros(field, 4, 1)


class TestSpanAccumulator:
    def test_incremental_matches_sum(self):
        rng = SplitMix64(37)
        for field in (Q, F2):
            for _ in range(15):
                n = 4
                parts = [
                    subspace_from_rows(
                        n,
                        [[field.coerce(rng.randint(-9, 9)) if field.p is None else rng.below(field.p) for _ in range(n)]
                         for _ in range(2)],
                        field=field,
                    )
                    for _ in range(3)
                ]
                acc = SpanAccumulator(n, field)
                for s in parts:
                    acc.add_subspace(s)
                assert acc.to_subspace() == subspace_sum(parts)
