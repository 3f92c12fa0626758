"""Closed-form counts and bounds against the enumeration oracle."""

import itertools
import math
from fractions import Fraction

import pytest

from typdeg.catalog import build_ffix, build_fneq, build_iso, build_u
from typdeg.closedform import (
    disjoint_pair_count,
    disjoint_pair_count_stirling,
    euler_factor_terms,
    fixed_point_count_diagnostic_bound,
    fixed_point_mu_bounds,
    graph_witness_bound,
    is_vacuous,
    mu_no_fixed_points,
    mu_unary_at_least,
    ntr_count_no_fixed_points,
    ntr_degree_bound_no_fixed_points,
    ntr_degree_no_fixed_points,
    typ_count_no_fixed_points,
    unary_p1_typ_degree,
)
from typdeg.degrees import (
    neutrality_degree,
    truth_probability,
    typicality_degree,
)
from typdeg.structures import Signature

FUNC = Signature.function()
U1 = Signature.unary(1)

E_INV = math.exp(-1.0)


class TestMuNoFixedPoints:
    def test_frozen_values(self):
        assert mu_no_fixed_points(4) == Fraction(81, 256)
        assert mu_no_fixed_points(1) == 0
        assert mu_no_fixed_points(2) == Fraction(1, 4)

    def test_limit_is_inverse_e(self):
        assert abs(float(mu_no_fixed_points(10**4)) - E_INV) < 1e-3

    def test_agrees_with_enumeration(self):
        from typdeg.logic import parse_property

        s = parse_property("forall y. F(y) != y", FUNC)
        for n in range(1, 8):
            assert truth_probability(FUNC, n, s).value == mu_no_fixed_points(n)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            mu_no_fixed_points(0)


class TestTypCountNoFixedPoints:
    def test_frozen_values(self):
        assert typ_count_no_fixed_points(1) == 0
        assert typ_count_no_fixed_points(2) == 1
        assert typ_count_no_fixed_points(3) == 20  # 3*4 + 1*8

    def test_agrees_with_enumeration(self):
        f = build_fneq()
        for n in range(1, 9):
            assert typicality_degree(FUNC, n, f).favorable == \
                typ_count_no_fixed_points(n)


class TestNtrCountNoFixedPoints:
    def test_frozen_values(self):
        assert ntr_count_no_fixed_points(2) == 2
        assert ntr_count_no_fixed_points(4) == 54  # C(4,2) * 3^2

    def test_agrees_with_enumeration(self):
        f = build_fneq()
        for n in (2, 4, 6, 8):
            assert neutrality_degree(FUNC, n, f).favorable == \
                ntr_count_no_fixed_points(n)

    def test_degree_is_tiny_at_twenty(self):
        assert ntr_degree_no_fixed_points(20) < Fraction(1, 10**6)

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            ntr_count_no_fixed_points(5)
        with pytest.raises(ValueError):
            ntr_count_no_fixed_points(0)

    def test_degree_bound_chain(self):
        # exact degree <= 2^h / (h^h sqrt(pi h)) at every even size 2h
        for n in range(2, 201, 2):
            assert float(ntr_degree_no_fixed_points(n)) <= \
                ntr_degree_bound_no_fixed_points(n)

    def test_bound_rejects_odd(self):
        with pytest.raises(ValueError):
            ntr_degree_bound_no_fixed_points(7)


class TestEulerFactors:
    def test_frozen_values(self):
        two = euler_factor_terms(2)
        assert two.b == Fraction(1, 4)
        assert two.c == 1
        assert two.product == Fraction(1, 4)
        assert euler_factor_terms(4).c == Fraction(7, 3)

    def test_product_is_the_typicality_degree(self):
        for n in range(2, 201):
            expected = Fraction(typ_count_no_fixed_points(n), n**n)
            assert euler_factor_terms(n).product == expected

    def test_product_tends_to_one(self):
        assert float(euler_factor_terms(500).product) > 0.95

    def test_needs_two_elements(self):
        with pytest.raises(ValueError):
            euler_factor_terms(1)


class TestUnaryP1TypDegree:
    def test_frozen_value(self):
        assert unary_p1_typ_degree(3) == Fraction(1, 2)

    def test_odd_sizes_are_exactly_half(self):
        for n in range(1, 202, 2):
            assert unary_p1_typ_degree(n) == Fraction(1, 2)

    def test_even_sizes_fall_short_of_half(self):
        for n in range(2, 40, 2):
            assert unary_p1_typ_degree(n) < Fraction(1, 2)

    def test_large_even_size_approaches_half(self):
        assert abs(float(unary_p1_typ_degree(1000)) - 0.5) < 0.02

    def test_agrees_with_enumeration(self):
        f = build_u(1)
        for n in range(1, 13):
            assert typicality_degree(U1, n, f).value == unary_p1_typ_degree(n)


class TestMuUnaryAtLeast:
    def test_frozen_values(self):
        assert mu_unary_at_least(2, 1) == Fraction(3, 4)
        assert mu_unary_at_least(5, 0) == 1
        assert mu_unary_at_least(3, 2) == Fraction(1, 2)

    def test_beyond_universe_is_zero(self):
        assert mu_unary_at_least(4, 5) == 0
        assert mu_unary_at_least(4, 9) == 0

    def test_agrees_with_enumeration_spot(self):
        f = build_u(1)
        for n, m in ((3, 1), (5, 3), (8, 4), (12, 7)):
            assert truth_probability(U1, n, f, mcount=m).value == \
                mu_unary_at_least(n, m)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            mu_unary_at_least(0, 1)
        with pytest.raises(ValueError):
            mu_unary_at_least(3, -1)


class TestFixedPointBounds:
    def test_frozen_pair(self):
        pair = fixed_point_mu_bounds(2, 1)
        assert (pair.lower, pair.upper) == (Fraction(1, 2), Fraction(1, 1))

    def test_all_points_fixed_collapses(self):
        # only the identity fixes everything, so both bounds are 1/n^n
        pair = fixed_point_mu_bounds(8, 8)
        assert pair.lower == pair.upper == Fraction(1, 8**8)
        mu = truth_probability(FUNC, 8, build_ffix(), mcount=8).value
        assert mu == pair.lower

    def test_lower_never_exceeds_upper(self):
        for n in range(1, 12):
            for m in range(n + 1):
                pair = fixed_point_mu_bounds(n, m)
                assert pair.lower <= pair.upper

    def test_brackets_enumeration(self):
        f = build_ffix()
        for n in range(1, 9):
            for m in range(1, min(3, n) + 1):
                mu = truth_probability(FUNC, n, f, mcount=m).value
                pair = fixed_point_mu_bounds(n, m)
                assert pair.lower <= mu <= pair.upper

    def test_limits_squeeze_to_factorial(self):
        n = 2000
        for m in (1, 2, 3):
            pair = fixed_point_mu_bounds(n, m)
            target = 1 / math.factorial(m)
            assert abs(float(pair.upper) - target) < 1e-2
            assert abs(float(pair.lower) - E_INV * target) < 1e-2

    def test_range_checked(self):
        with pytest.raises(ValueError):
            fixed_point_mu_bounds(3, 4)
        with pytest.raises(ValueError):
            fixed_point_mu_bounds(0, 0)


class TestDiagnosticBound:
    def test_overcounts_the_favorable_count(self):
        # the sum multiply counts overlapping fixed sets; diagnostic only
        f = build_ffix()
        for n in range(1, 7):
            for m in range(n + 1):
                favorable = truth_probability(FUNC, n, f, mcount=m).favorable
                assert favorable <= fixed_point_count_diagnostic_bound(n, m)

    def test_shrinks_with_the_requirement(self):
        values = [fixed_point_count_diagnostic_bound(6, m) for m in range(7)]
        assert values == sorted(values, reverse=True)


class TestGraphWitnessBound:
    def test_frozen_values(self):
        assert graph_witness_bound(3, "isolated") == Fraction(3, 4)
        assert graph_witness_bound(3, "exactly-k", 1) == Fraction(3, 2)
        assert graph_witness_bound(30, "isolated") == Fraction(30, 2**29)
        assert graph_witness_bound(5, "all-adjacent") == \
            graph_witness_bound(5, "isolated")

    def test_vacuous_flag(self):
        assert is_vacuous(graph_witness_bound(3, "exactly-k", 1))
        assert not is_vacuous(graph_witness_bound(6, "isolated"))

    def test_dominates_enumeration(self):
        GRAPH = Signature.graph()
        mu = truth_probability(GRAPH, 3, build_iso(), mcount=1).value
        assert mu == Fraction(1, 2)
        assert mu <= graph_witness_bound(3, "isolated")

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            graph_witness_bound(1, "isolated")
        with pytest.raises(ValueError):
            graph_witness_bound(4, "exactly-k", 4)
        with pytest.raises(ValueError):
            graph_witness_bound(4, "degree-sum")


def _disjoint_pairs_brute(q: int) -> int:
    # label each element: first set, second set, or neither
    return sum(
        1 in labels and 2 in labels
        for labels in itertools.product((0, 1, 2), repeat=q)
    )


class TestDisjointPairs:
    def test_frozen_values(self):
        assert disjoint_pair_count(0) == 0
        assert disjoint_pair_count(2) == 2
        assert disjoint_pair_count(3) == 12

    def test_matches_brute_force(self):
        for q in range(13):
            assert disjoint_pair_count(q) == _disjoint_pairs_brute(q)

    def test_stirling_form_agrees(self):
        for q in range(31):
            assert disjoint_pair_count(q) == disjoint_pair_count_stirling(q)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            disjoint_pair_count(-1)
        with pytest.raises(ValueError):
            disjoint_pair_count_stirling(-2)
