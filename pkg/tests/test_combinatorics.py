"""Exact counting primitives, checked against independent oracles."""

import math
from fractions import Fraction

import pytest

from typdeg.combinatorics import (
    binomial,
    central_binomial_within_bound,
    exact_ratio,
    falling_factorial,
    half_binomial_sum,
    stirling2,
    stirling2_pairs,
    stirling2_triples,
)


# ---------------------------------------------------------------------------
# Oracles.  Both deliberately avoid the alternating-sum formula under test:
# one enumerates partitions outright, the other uses the additive recurrence.

def block_counts(n: int) -> dict:
    """Histogram {block count: partitions} over all set partitions of an
    n-set, built by inserting elements one at a time (Bell-number recursion:
    each element joins an existing block or opens a new one)."""
    partitions = [[]]
    for element in range(n):
        grown = []
        for blocks in partitions:
            for i in range(len(blocks)):
                grown.append(
                    [b | {element} if j == i else b for j, b in enumerate(blocks)]
                )
            grown.append(blocks + [{element}])
        partitions = grown
    histogram: dict = {}
    for blocks in partitions:
        histogram[len(blocks)] = histogram.get(len(blocks), 0) + 1
    return histogram


def stirling_brute(n: int, k: int) -> int:
    return block_counts(n).get(k, 0)


def stirling_recurrence(n: int, k: int) -> int:
    table = {(0, 0): 1}
    for i in range(1, n + 1):
        for j in range(0, k + 1):
            table[(i, j)] = (
                j * table.get((i - 1, j), 0) + table.get((i - 1, j - 1), 0)
            )
    return table.get((n, k), 0)


# ---------------------------------------------------------------------------

class TestBinomial:
    def test_small_cases(self):
        assert binomial(4, 2) == 6
        assert binomial(5, 0) == 1
        assert binomial(3, 5) == 0

    def test_pascal_identity(self):
        for n in range(1, 65):
            for k in range(1, n + 1):
                assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)

    def test_row_sums(self):
        for n in range(0, 65):
            assert sum(binomial(n, k) for k in range(n + 1)) == 2**n


class TestFallingFactorial:
    def test_small_cases(self):
        assert falling_factorial(5, 2) == 20
        assert falling_factorial(7, 0) == 1
        assert falling_factorial(3, 5) == 0

    def test_product_with_remaining_factorial(self):
        for n in range(0, 31):
            for k in range(0, n + 1):
                assert falling_factorial(n, k) * math.factorial(n - k) == math.factorial(n)


class TestStirling2:
    def test_frozen_examples(self):
        assert stirling2(4, 2) == 7
        assert stirling2(5, 2) == 15
        assert stirling2(4, 3) == 6

    def test_against_brute_force(self):
        for n in range(0, 11):
            histogram = block_counts(n)
            for k in range(0, n + 1):
                assert stirling2(n, k) == histogram.get(k, 0), (n, k)

    def test_against_recurrence(self):
        for n in range(0, 26):
            for k in range(0, n + 1):
                assert stirling2(n, k) == stirling_recurrence(n, k), (n, k)

    def test_out_of_range(self):
        assert stirling2(3, 5) == 0
        assert stirling2(0, 0) == 1
        assert stirling2(5, 0) == 0

    def test_pair_and_triple_closed_forms(self):
        for n in range(3, 41):
            assert stirling2(n, 2) == 2 ** (n - 1) - 1 == stirling2_pairs(n)
            assert stirling2(n, 3) == (3 - 3 * 2**n + 3**n) // 6 == stirling2_triples(n)


class TestHalfBinomialSum:
    def test_frozen_examples(self):
        assert half_binomial_sum(5) == 16
        assert half_binomial_sum(4) == 5
        assert half_binomial_sum(1) == 1

    def test_closed_forms(self):
        for n in range(1, 65):
            total = half_binomial_sum(n)
            if n % 2:
                assert total == 2 ** (n - 1)
            else:
                assert total == 2 ** (n - 1) - binomial(n, n // 2) // 2

    def test_matches_direct_sum(self):
        for n in range(1, 40):
            direct = sum(binomial(n, k) for k in range(n + 1) if 2 * k < n)
            assert half_binomial_sum(n) == direct

    def test_ratio_approaches_half_row(self):
        # The even-n defect C(n, n/2)/2^n shrinks like 1/sqrt(n); at 10^4 it
        # is already below 0.02.
        n = 10**4
        gap = 1 - Fraction(half_binomial_sum(n), 2 ** (n - 1))
        assert 0 < gap < Fraction(1, 50)


class TestCentralBinomialBound:
    def test_frozen_examples(self):
        check = central_binomial_within_bound(1)
        assert check.value == 2
        assert check.holds
        assert check.bound == pytest.approx(4 / math.sqrt(math.pi), rel=1e-12)

        check = central_binomial_within_bound(5)
        assert check.value == 252
        assert check.holds
        assert check.bound == pytest.approx(4**5 / math.sqrt(5 * math.pi), rel=1e-12)

    def test_exact_value(self):
        for n in (1, 2, 3, 10, 50):
            assert central_binomial_within_bound(n).value == binomial(2 * n, n)

    def test_holds_up_to_thousand(self):
        for n in range(1, 1001):
            assert central_binomial_within_bound(n).holds, n

    def test_bound_is_finite_float_or_inf(self):
        # Very large n overflow binary64; the reported bound degrades to inf
        # but the exact certificate still decides the comparison.
        check = central_binomial_within_bound(600)
        assert check.holds
        assert check.bound == math.inf or check.bound > 0


class TestExactRatio:
    def test_lowest_terms(self):
        assert exact_ratio(6, 8) == Fraction(3, 4)

    def test_zero_denominator_rejected(self):
        with pytest.raises((ValueError, ZeroDivisionError)):
            exact_ratio(1, 0)
