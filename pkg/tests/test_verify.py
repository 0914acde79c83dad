"""Verification-harness tests: PRNG pinning, suite plumbing, replay dumps."""

import json

from borelenv import jsonio
from borelenv.cli import main
from borelenv.linalg import FieldSpec, rref
from borelenv.rng import (
    SplitMix64,
    derive_stream,
    random_invertible,
    random_singular,
    random_upper_invertible,
)
from borelenv.verify import (
    RunConfig,
    bruhat_order_exhaustive,
    bruhat_roundtrip,
    envelope_identity,
    gl2_elements,
    intersection_dimension,
    report_json,
    restricted_envelope,
    run_suites,
    tangent_cover,
    ulp_roundtrip,
    witness_construction,
)

Q = FieldSpec.rational()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)


class TestSplitMix64:
    def test_reference_vector(self):
        # published SplitMix64 outputs for seed 0
        rng = SplitMix64(0)
        assert rng.next_u64() == 0xE220A8397B1DCDAF
        assert rng.next_u64() == 0x6E789E6AA1B965F4
        assert rng.next_u64() == 0x06C45D188009454F

    def test_determinism_across_instances(self):
        a = SplitMix64(12345)
        b = SplitMix64(12345)
        assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]

    def test_derive_stream_distinct(self):
        xs = {derive_stream(1, k).next_u64() for k in range(100)}
        assert len(xs) == 100


class TestGenerators:
    def test_random_invertible_has_full_rank(self):
        rng = SplitMix64(5)
        for field in (Q, F2, F3):
            for _ in range(20):
                m = random_invertible(rng, field, 3)
                assert rref(m).rank == 3

    def test_random_singular_is_singular(self):
        rng = SplitMix64(6)
        for field in (Q, F2, F3):
            for _ in range(20):
                n = 1 + rng.below(5)
                m = random_singular(rng, field, n)
                assert rref(m).rank < max(n, 1) or n == 0

    def test_random_upper_is_upper_invertible(self):
        rng = SplitMix64(8)
        for field in (Q, F2):
            for _ in range(20):
                m = random_upper_invertible(rng, field, 4)
                assert m.is_upper_triangular()
                assert rref(m).rank == 4

    def test_rational_entries_bounded(self):
        rng = SplitMix64(9)
        m = random_invertible(rng, Q, 5)
        assert all(x.denominator == 1 and abs(x) <= 9 for x in m.entries)


class TestGL2:
    def test_counts(self):
        assert len(gl2_elements(F2)) == 6
        assert len(gl2_elements(F3)) == 48


class TestSuites:
    def test_exhaustive_suites_pass(self):
        assert bruhat_order_exhaustive(max_n=3).passed
        assert intersection_dimension(max_n=3).passed

    def test_sampled_suites_pass_small(self):
        fields = (F2, Q)
        assert envelope_identity(fields, [2, 3], 3, seed=1, exhaustive_small=False).passed
        assert witness_construction(fields, [2, 3], 4, seed=2).passed
        assert restricted_envelope(fields, [2, 3], 3, seed=3, exhaustive_small=False).passed
        assert ulp_roundtrip(fields, [1, 2, 3], 6, seed=4).passed
        assert bruhat_roundtrip(fields, [1, 2, 3], 6, seed=5).passed
        assert tangent_cover(fields, [2, 3], 2, seed=6, exhaustive_small=False).passed

    def test_threads_do_not_change_results(self):
        fields = (F3,)
        a = envelope_identity(fields, [3], 6, seed=11, threads=1, exhaustive_small=False)
        b = envelope_identity(fields, [3], 6, seed=11, threads=4, exhaustive_small=False)
        assert a.to_json() == b.to_json()

    def test_report_byte_identical(self):
        config = RunConfig(21, 3, (F2, Q), (2, 3), "full")
        r1 = report_json(run_suites(config, suites=("weyl", "decomp")))
        r2 = report_json(run_suites(config, suites=("weyl", "decomp")))
        assert r1 == r2

    def test_restricted_mode_runs_restricted_only(self):
        config = RunConfig(5, 2, (F2,), (2, 3), "restricted")
        report = run_suites(config, suites=("envelope",))
        names = [c["criterion"] for s in report["suites"] for c in s["criteria"]]
        assert names == ["restricted-envelope"]


class TestReplayDumps:
    def test_failure_dump_replays_through_cli(self, tmp_path, capsys):
        # force a failing trial by corrupting the oracle comparison: run the
        # suite against a field/size plan and graft a fake mismatch dump,
        # then check the dump's matrix JSON drives the named command
        from borelenv.verify import _dump

        rng = derive_stream(77, 0)
        g = random_invertible(rng, F3, 2)
        dump = _dump("envelope-identity", F3, 2, 77, 0, g,
                     "borelenv envelope --matrix INPUT", "synthetic")
        # the dump's input must be complete, loadable matrix JSON
        path = tmp_path / "replay.json"
        path.write_text(json.dumps(dump["input"]))
        code = main(["envelope", "--matrix", str(path)])
        out = json.loads(capsys.readouterr().out)
        assert code == 0  # the identity holds: certificate spans
        assert out["spans"] is True
        # and the matrix parsed from the dump is the one dumped
        assert jsonio.matrix_from_json(dump["input"]) == g

    def test_failures_recorded_and_stop_suite(self):
        # a wrong expected value in the dimension law would be caught; build
        # a criterion result through the real path and check dump structure
        res = intersection_dimension(max_n=2)
        assert res.passed and res.failures == []
        assert res.counts["checked"] == 3  # |S_1| + |S_2|
