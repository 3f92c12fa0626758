"""Exact degrees by enumeration and the identities binding them."""

from fractions import Fraction

import pytest

from typdeg import batcheval
from typdeg.catalog import build_basic, build_fneq, build_iso, build_u
from typdeg.degrees import (
    CapExceededError,
    Caps,
    neutrality_degree,
    partition_identity_check,
    report_to_json_dict,
    truth_probability,
    typicality_degree,
)
from typdeg.logic import (
    FreeVariableError,
    Not,
    classify,
    extension_size,
    parse_property,
)
from typdeg.structures import DISTINCT, FREE, Signature, enumerate_structures

FUNC = Signature.function()
GRAPH = Signature.graph()
U1 = Signature.unary(1)
U2 = Signature.unary(2)

FNEQ = build_fneq()
ISO = build_iso()


class TestTypicality:
    def test_no_fixed_point_at_two(self):
        r = typicality_degree(FUNC, 2, FNEQ)
        assert r.value == Fraction(1, 4)
        assert (r.favorable, r.total) == (1, 4)

    def test_single_predicate_at_three(self):
        assert typicality_degree(U1, 3, build_u(1)).value == Fraction(1, 2)

    def test_isolated_node_at_three(self):
        # only the empty graph leaves more than 1.5 nodes isolated
        assert typicality_degree(GRAPH, 3, ISO).value == Fraction(1, 8)

    def test_report_fields(self):
        r = typicality_degree(FUNC, 3, FNEQ)
        assert r.kind == "typ"
        assert r.method == "enumeration"
        assert r.convention == FREE
        assert r.formula_text == "F(x) != x"
        assert r.float_value == float(r.value)
        assert r.value == Fraction(r.favorable, r.total)

    def test_size_one_typicality_needs_a_witness(self):
        # at n=1 the majority threshold is one element
        r = typicality_degree(U1, 1, build_u(1))
        assert r.value == Fraction(1, 2)


class TestNeutrality:
    def test_no_fixed_point_at_two(self):
        assert neutrality_degree(FUNC, 2, FNEQ).value == Fraction(1, 2)

    def test_single_predicate_at_two(self):
        assert neutrality_degree(U1, 2, build_u(1)).value == Fraction(1, 2)

    def test_isolated_node_at_two(self):
        # isolation count on two nodes is 0 or 2, never 1
        assert neutrality_degree(GRAPH, 2, ISO).value == 0

    def test_odd_size_rejected(self):
        with pytest.raises(ValueError):
            neutrality_degree(FUNC, 3, FNEQ)


class TestTruthProbability:
    def test_no_fixed_point_sentence_at_two(self):
        s = parse_property("forall y. F(y) != y", FUNC)
        assert truth_probability(FUNC, 2, s).value == Fraction(1, 4)

    def test_predicate_witness_at_two(self):
        r = truth_probability(U1, 2, build_u(1), mcount=1)
        assert r.value == Fraction(3, 4)
        assert r.kind == "mu-at-least(1)"

    def test_isolated_witness_at_three(self):
        assert truth_probability(GRAPH, 3, ISO, mcount=1).value == Fraction(1, 2)

    def test_zero_witnesses_is_vacuous(self):
        assert truth_probability(FUNC, 3, FNEQ, mcount=0).value == 1

    def test_property_needs_mcount(self):
        with pytest.raises(FreeVariableError):
            truth_probability(FUNC, 2, FNEQ)

    def test_sentence_refuses_mcount(self):
        s = parse_property("forall y. F(y) != y", FUNC)
        with pytest.raises(FreeVariableError):
            truth_probability(FUNC, 2, s, mcount=1)

    def test_negative_mcount_rejected(self):
        with pytest.raises(ValueError):
            truth_probability(FUNC, 2, FNEQ, mcount=-1)


PARTITION_CASES = [
    (FUNC, 3, FNEQ, FREE),
    (FUNC, 2, FNEQ, FREE),
    (U2, 2, parse_property("U1(x) & U2(x)", U2), FREE),
    (U2, 3, build_basic([1, 2], [1, 0]), DISTINCT),
    (GRAPH, 4, ISO, FREE),
]


class TestPartitionIdentity:
    @pytest.mark.parametrize("sig,n,f,conv", PARTITION_CASES)
    def test_terms_sum_to_one(self, sig, n, f, conv):
        report = partition_identity_check(sig, n, f, conv)
        total = report.typical + report.negated_typical
        if n % 2 == 0:
            total += report.neutral
        else:
            assert report.neutral is None
        assert total == 1

    def test_even_split_at_two(self):
        report = partition_identity_check(FUNC, 2, FNEQ)
        assert report.typical == Fraction(1, 4)
        assert report.negated_typical == Fraction(1, 4)
        assert report.neutral == Fraction(1, 2)


class TestOrderAndMonotonicity:
    def test_conjunction_never_beats_a_conjunct(self):
        # a stronger property has a smaller typicality degree
        both = parse_property("U1(x) & U2(x)", U2)
        one = build_u(1)
        for n in (1, 2, 3, 4, 5):
            assert (
                typicality_degree(U2, n, both).value
                <= typicality_degree(U2, n, one).value
            )

    def test_neutrality_ignores_negation(self):
        for sig, f, sizes in (
            (FUNC, FNEQ, (2, 4)),
            (U1, build_u(1), (2, 4, 6)),
            (GRAPH, ISO, (2, 4)),
        ):
            for n in sizes:
                assert (
                    neutrality_degree(sig, n, f).value
                    == neutrality_degree(sig, n, Not(f)).value
                )

    def test_majority_witness_count_is_typicality(self):
        for sig, f, sizes in (
            (FUNC, FNEQ, (2, 3, 4, 5)),
            (GRAPH, ISO, (2, 3, 4)),
            (U1, build_u(1), (1, 2, 3, 4)),
        ):
            for n in sizes:
                mu = truth_probability(sig, n, f, mcount=n // 2 + 1)
                assert mu.value == typicality_degree(sig, n, f).value

    def test_witness_requirement_is_antitone(self):
        for n in (2, 3, 4):
            values = [
                truth_probability(FUNC, n, FNEQ, mcount=m).value
                for m in range(n + 2)
            ]
            assert all(a >= b for a, b in zip(values, values[1:]))
        assert values[-1] == 0  # more witnesses than elements


class TestScanAgreement:
    @pytest.mark.parametrize(
        "sig,n,conv,text",
        [
            (FUNC, 3, FREE, "F(x) != x"),
            (FUNC, 2, FREE, "F(F(x)) = x"),
            (GRAPH, 3, FREE, "forall y. !E(x, y)"),
            (GRAPH, 3, FREE, "exists! y. E(x, y)"),
            (U2, 2, FREE, "U1(x) & !U2(x)"),
            (U2, 3, DISTINCT, "U1(x) | U2(x)"),
        ],
    )
    def test_batch_counts_match_reference_evaluator(self, sig, n, conv, text):
        f = parse_property(text, sig)
        counts = batcheval.scan(sig, n, conv, f, mcounts=(0, 1, n))
        typical = neutral = 0
        at_least = {0: 0, 1: 0, n: 0}
        total = 0
        for m in enumerate_structures(sig, n, conv):
            total += 1
            ext = extension_size(f, m)
            label = classify(f, m)
            typical += label == "typical"
            neutral += label == "neutral"
            for mc in at_least:
                at_least[mc] += ext >= mc
        assert counts.total == total
        assert counts.typical == typical
        assert counts.neutral == neutral
        assert counts.at_least == at_least

    def test_sentence_counts_match_reference_evaluator(self):
        from typdeg.logic import evaluate

        s = parse_property("forall y. exists z. F(z) = y", FUNC)
        counts = batcheval.scan(FUNC, 3, FREE, s)
        brute = sum(
            evaluate(s, m, {}) for m in enumerate_structures(FUNC, 3)
        )
        assert counts.true_count == brute  # 3! bijections of 27 tables
        assert brute == 6


class TestChunkingIndependence:
    def test_chunk_size_does_not_change_counts(self):
        baseline = typicality_degree(FUNC, 4, FNEQ)
        for chunk in (1, 7, 64, 10**6):
            r = typicality_degree(FUNC, 4, FNEQ, chunk_size=chunk)
            assert (r.favorable, r.total) == (baseline.favorable, baseline.total)

    def test_threads_do_not_change_counts(self):
        baseline = truth_probability(GRAPH, 4, ISO, mcount=2)
        for threads in (2, 4):
            r = truth_probability(GRAPH, 4, ISO, mcount=2, threads=threads)
            assert (r.favorable, r.total) == (baseline.favorable, baseline.total)


class TestCaps:
    def test_function_cap(self):
        with pytest.raises(CapExceededError, match="Monte Carlo"):
            typicality_degree(FUNC, 9, FNEQ)

    def test_graph_cap(self):
        with pytest.raises(CapExceededError):
            typicality_degree(GRAPH, 8, ISO)

    def test_unary_cap_counts_bits(self):
        with pytest.raises(CapExceededError):
            typicality_degree(U2, 13, build_u(1))

    def test_caps_override(self):
        wide = Caps(function_n=9)
        r = typicality_degree(FUNC, 4, FNEQ, caps=Caps(function_n=4))
        assert r.total == 4**4
        with pytest.raises(CapExceededError):
            typicality_degree(FUNC, 5, FNEQ, caps=Caps(function_n=4))
        assert wide.function_n == 9


class TestSerialization:
    def test_json_dict_uses_decimal_strings(self):
        doc = report_to_json_dict(typicality_degree(FUNC, 4, FNEQ))
        assert doc["favorable"] == "189"
        assert doc["total"] == "256"
        assert doc["value"] == "189/256"
        assert doc["method"] == "enumeration"
        assert isinstance(doc["float_value"], float)
