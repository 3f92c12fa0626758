"""Sampling estimates: Wilson intervals, determinism, stream splitting."""

import math

import pytest

from typdeg.catalog import build_fneq, build_iso, build_u
from typdeg.logic import FreeVariableError, parse_property
from typdeg.montecarlo import (
    GENERATOR_ID,
    MIN_SAMPLES,
    estimate_degree,
    estimate_to_json,
    estimate_truth_probability,
    make_rng,
    wilson_interval,
)
from typdeg.structures import DISTINCT, FREE, Signature

FUNC = Signature.function()
GRAPH = Signature.graph()
U1 = Signature.unary(1)

FNEQ = build_fneq()


class TestWilsonInterval:
    def test_no_hits_pins_the_floor(self):
        low, high = wilson_interval(0, 1000)
        assert low == 0.0
        assert 0.0 < high < 0.01

    def test_all_hits_pins_the_ceiling(self):
        low, high = wilson_interval(1000, 1000)
        assert high == 1.0
        assert 0.99 < low < 1.0

    def test_contains_the_point_estimate(self):
        for favorable, samples in ((1, 100), (37, 100), (250, 1000), (999, 1000)):
            low, high = wilson_interval(favorable, samples)
            assert low <= favorable / samples <= high

    def test_narrows_with_samples(self):
        widths = [
            high - low
            for low, high in (
                wilson_interval(n // 4, n) for n in (100, 1000, 10000)
            )
        ]
        assert widths == sorted(widths, reverse=True)

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            wilson_interval(1, 0)
        with pytest.raises(ValueError):
            wilson_interval(5, 4)
        with pytest.raises(ValueError):
            wilson_interval(-1, 10)


class TestDeterminism:
    def test_same_seed_same_json(self):
        a = estimate_degree(FUNC, 2, FNEQ, "typ", samples=2000, seed=7)
        b = estimate_degree(FUNC, 2, FNEQ, "typ", samples=2000, seed=7)
        assert estimate_to_json(a) == estimate_to_json(b)
        assert a.generator == GENERATOR_ID

    def test_different_seed_different_draws(self):
        a = estimate_degree(FUNC, 3, FNEQ, "typ", samples=2000, seed=1)
        b = estimate_degree(FUNC, 3, FNEQ, "typ", samples=2000, seed=2)
        # equality of counts across seeds is possible but wildly unlikely
        assert a.favorable != b.favorable

    def test_make_rng_streams_are_distinct(self):
        a = make_rng(0, 0).integers(0, 2**32, size=8).tolist()
        b = make_rng(0, 1).integers(0, 2**32, size=8).tolist()
        assert a != b


class TestEstimateDegree:
    def test_interval_covers_known_quarter(self):
        est = estimate_degree(FUNC, 2, FNEQ, "typ", samples=10**4, seed=7)
        assert est.ci_low <= 0.25 <= est.ci_high
        assert est.ci_low <= est.point <= est.ci_high
        assert est.point == est.favorable / est.samples

    def test_large_size_saturates(self):
        est = estimate_degree(FUNC, 50, FNEQ, "typ", samples=10**4, seed=3)
        assert est.point >= 0.999

    def test_neutrality_at_two(self):
        est = estimate_degree(FUNC, 2, FNEQ, "ntr", samples=10**4, seed=5)
        assert est.ci_low <= 0.5 <= est.ci_high

    def test_distinct_convention_sampling(self):
        est = estimate_degree(
            U1, 3, build_u(1), "typ", samples=4000, seed=11, conv=DISTINCT
        )
        assert est.convention == DISTINCT
        assert est.ci_low <= 0.5 <= est.ci_high  # 3 of the 6 admissible sets

    def test_rejects_bad_requests(self):
        with pytest.raises(ValueError):
            estimate_degree(FUNC, 2, FNEQ, "typ", samples=MIN_SAMPLES - 1, seed=0)
        with pytest.raises(ValueError):
            estimate_degree(FUNC, 3, FNEQ, "ntr", samples=1000, seed=0)
        with pytest.raises(ValueError):
            estimate_degree(FUNC, 2, FNEQ, "median", samples=1000, seed=0)
        with pytest.raises(ValueError):
            estimate_degree(FUNC, 2, FNEQ, "typ", samples=1000, seed=0, streams=0)
        s = parse_property("forall y. F(y) != y", FUNC)
        with pytest.raises(FreeVariableError):
            estimate_degree(FUNC, 2, s, "typ", samples=1000, seed=0)


class TestEstimateTruthProbability:
    def test_rare_witness_never_hits(self):
        est = estimate_truth_probability(
            GRAPH, 30, build_iso(), mcount=1, samples=10**5, seed=0
        )
        assert est.favorable == 0
        assert est.ci_low == 0.0

    def test_all_moved_matches_inverse_e(self):
        est = estimate_truth_probability(
            FUNC, 100, FNEQ, mcount=100, samples=10**5, seed=1
        )
        assert abs(est.point - math.exp(-1.0)) < 0.01

    def test_sentence_route(self):
        s = parse_property("forall y. F(y) != y", FUNC)
        est = estimate_truth_probability(FUNC, 4, s, samples=10**4, seed=2)
        assert est.kind == "mu"
        assert est.ci_low <= 81 / 256 <= est.ci_high

    def test_zero_witnesses_skips_drawing(self):
        est = estimate_truth_probability(
            FUNC, 10**6, FNEQ, mcount=0, samples=5000, seed=9
        )
        assert est.point == 1.0
        assert (est.ci_low, est.ci_high) == (1.0, 1.0)
        assert est.favorable == est.samples

    def test_rejects_mismatched_shapes(self):
        s = parse_property("forall y. F(y) != y", FUNC)
        with pytest.raises(FreeVariableError):
            estimate_truth_probability(FUNC, 2, s, mcount=1, samples=1000, seed=0)
        with pytest.raises(FreeVariableError):
            estimate_truth_probability(FUNC, 2, FNEQ, samples=1000, seed=0)
        with pytest.raises(ValueError):
            estimate_truth_probability(FUNC, 2, FNEQ, mcount=-1, samples=1000, seed=0)


class TestStreamSplitting:
    def test_parallel_equals_manual_stream_sum(self):
        whole = estimate_degree(
            FUNC, 4, FNEQ, "typ", samples=2000, seed=11, streams=4
        )
        parts = [
            estimate_degree(
                FUNC, 4, FNEQ, "typ",
                samples=500, seed=11, streams=1, base_stream=i,
            )
            for i in range(4)
        ]
        assert whole.favorable == sum(p.favorable for p in parts)

    def test_threads_do_not_change_the_count(self):
        one = estimate_degree(
            FUNC, 4, FNEQ, "typ", samples=4000, seed=3, streams=4, threads=1
        )
        two = estimate_degree(
            FUNC, 4, FNEQ, "typ", samples=4000, seed=3, streams=4, threads=4
        )
        assert one.favorable == two.favorable

    def test_uneven_split_keeps_total(self):
        est = estimate_degree(
            FUNC, 3, FNEQ, "typ", samples=1001, seed=5, streams=3
        )
        assert est.samples == 1001
        assert 0 <= est.favorable <= 1001
