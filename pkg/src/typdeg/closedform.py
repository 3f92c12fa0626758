"""Closed-form counts, degrees, and bounds for the built-in properties.

Everything returns exact ints or Fractions.  Each formula here has an
independent enumeration oracle in the test suite; the two routes must agree
exactly on every size the caps allow.  Bounds are reported verbatim even when
they exceed 1 (callers may flag them vacuous, never clamp them).

Notation used in the docstrings: C(n,k) binomials, (n)_k falling factorials,
{n k} Stirling numbers of the second kind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .combinatorics import (
    binomial,
    half_binomial_sum,
    stirling2_pairs,
    stirling2_triples,
)

__all__ = [
    "mu_no_fixed_points",
    "typ_count_no_fixed_points",
    "ntr_count_no_fixed_points",
    "ntr_degree_no_fixed_points",
    "ntr_degree_bound_no_fixed_points",
    "euler_factor_terms",
    "EulerFactors",
    "unary_p1_typ_degree",
    "mu_unary_at_least",
    "BoundPair",
    "fixed_point_mu_bounds",
    "fixed_point_count_diagnostic_bound",
    "graph_witness_bound",
    "is_vacuous",
    "disjoint_pair_count",
]


def mu_no_fixed_points(n: int) -> Fraction:
    """mu_n(no fixed point) = (n-1)^n / n^n; tends to 1/e."""
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction((n - 1) ** n, n**n)


def typ_count_no_fixed_points(n: int) -> int:
    """|{f : more than n/2 elements moved}| = sum_{m > n/2} C(n,m) (n-1)^m.

    A function moving exactly the elements of an m-set A is free on A (any
    value except the point itself) and forced to fix the rest, giving
    C(n,m) (n-1)^m tables per size m.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return sum(
        binomial(n, m) * (n - 1) ** m for m in range(n + 1) if 2 * m > n
    )


def ntr_count_no_fixed_points(n: int) -> int:
    """|{f : exactly n/2 elements moved}| = C(n, n/2) (n-1)^(n/2), even n."""
    if n < 2 or n % 2:
        raise ValueError("neutrality count needs an even n >= 2")
    half = n // 2
    return binomial(n, half) * (n - 1) ** half


def ntr_degree_no_fixed_points(n: int) -> Fraction:
    """d_n(no fixed point : ntr) = C(n, n/2) (n-1)^(n/2) / n^n."""
    return Fraction(ntr_count_no_fixed_points(n), n**n)


def ntr_degree_bound_no_fixed_points(n: int) -> float:
    """Upper bound on the neutrality degree at even size n = 2h:

        d_n(no fixed point : ntr) <= 2^h / (h^h sqrt(pi h)).

    Follows from C(2h,h) <= 4^h / sqrt(pi h) and (2h-1)^h < (2h)^h.
    Evaluated in logs to stay finite for large n.
    """
    if n < 2 or n % 2:
        raise ValueError("bound needs an even n >= 2")
    half = n // 2
    log_value = half * math.log(2) - half * math.log(half) \
        - 0.5 * math.log(math.pi * half)
    return math.exp(log_value)


@dataclass(frozen=True)
class EulerFactors:
    """d_n(no fixed point : typ) split as b_n * c_n with b_n -> 1/e, c_n -> e."""

    b: Fraction
    c: Fraction
    product: Fraction


def euler_factor_terms(n: int) -> EulerFactors:
    """b_n = ((n-1)/n)^n and c_n = sum_{k < n/2} C(n,k) / (n-1)^k.

    Exactly b_n * c_n = typ_count_no_fixed_points(n) / n^n: substituting
    m = n - k turns the sum of C(n,m) (n-1)^m over m > n/2 into the product.
    """
    if n < 2:
        raise ValueError("factorization needs n >= 2")
    b = Fraction(n - 1, n) ** n
    c = sum(
        (Fraction(binomial(n, k), (n - 1) ** k) for k in range(n + 1) if 2 * k < n),
        start=Fraction(0),
    )
    return EulerFactors(b=b, c=c, product=b * c)


def unary_p1_typ_degree(n: int) -> Fraction:
    """d_n(U : typ) under the free convention = sum_{m > n/2} C(n,m) / 2^n.

    Equals 1/2 exactly for odd n; the extra predicates of a width-k signature
    multiply favorable and total counts by the same power of 2 and cancel.
    """
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction(half_binomial_sum(n), 2**n)


def mu_unary_at_least(n: int, m: int) -> Fraction:
    """mu_n(at least m elements in U) = 1 - sum_{i < m} C(n,i) / 2^n (free).

    Valid for 0 <= m; values of m beyond n leave an empty tail and the
    probability drops to 0 at m = n + 1 onward only through the sum.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if m < 0:
        raise ValueError("witness count must be nonnegative")
    head = sum(binomial(n, i) for i in range(min(m, n + 1)))
    return 1 - Fraction(head, 2**n)


@dataclass(frozen=True)
class BoundPair:
    lower: Fraction
    upper: Fraction


def fixed_point_mu_bounds(n: int, m: int) -> BoundPair:
    """Bounds on mu_n(at least m fixed points):

        C(n,m) (n-1)^(n-m) / n^n  <=  mu  <=  C(n,m) n^(n-m) / n^n.

    The lower bound counts tables fixing a chosen m-set and moving the rest;
    the upper bound frees the rest entirely.  The pair squeezes to
    [1/(e m!), 1/m!] as n grows.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    coeff = binomial(n, m)
    total = n**n
    return BoundPair(
        lower=Fraction(coeff * (n - 1) ** (n - m), total),
        upper=Fraction(coeff * n ** (n - m), total),
    )


def fixed_point_count_diagnostic_bound(n: int, m: int) -> int:
    """Diagnostic over-count sum_{m <= i <= n} n^i of tables with >= m fixed
    points.  Strictly an upper bound on the favorable count (it multiply
    counts overlapping fixed sets); never use it as ground truth.
    """
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    return sum(n**i for i in range(m, n + 1))


def graph_witness_bound(n: int, which: str, k: int = 0) -> Fraction:
    """Upper bound on mu_n(at least one witness) for degree-pattern properties:

        isolated      n / 2^(n-1)          (some vertex with no neighbor)
        all-adjacent  n / 2^(n-1)          (some vertex joined to all others)
        exactly-k     n C(n-1,k) / 2^(n-1) (some vertex of degree exactly k)

    A union bound over the n candidate vertices; each fixes its n-1 incident
    edges, leaving 2^C(n-1,2) of the 2^C(n,2) graphs, times the C(n-1,k)
    neighbor choices in the exactly-k case.  Values above 1 are reported
    verbatim; see is_vacuous.
    """
    if n < 2:
        raise ValueError("witness bounds need n >= 2")
    if which in ("isolated", "all-adjacent"):
        return Fraction(n, 2 ** (n - 1))
    if which == "exactly-k":
        if not 0 <= k <= n - 1:
            raise ValueError("need 0 <= k <= n-1")
        return Fraction(n * binomial(n - 1, k), 2 ** (n - 1))
    raise ValueError(f"unknown witness pattern {which!r}")


def is_vacuous(bound: Fraction) -> bool:
    """A probability bound above 1 carries no information."""
    return bound > 1


def disjoint_pair_count(q: int) -> int:
    """Ordered pairs of disjoint nonempty subsets of a q-set:
    3^q - 2^(q+1) + 1, which also equals 2 {q 2} + 6 {q 3}.

    Each element picks first set, second set, or neither (3^q), minus the
    pairs with an empty component.
    """
    if q < 0:
        raise ValueError("q must be nonnegative")
    return 3**q - 2 ** (q + 1) + 1


def disjoint_pair_count_stirling(q: int) -> int:
    """Companion identity 2 {q 2} + 6 {q 3} (covering pairs plus strictly
    partial pairs, ordered); both braces vanish below q = 2."""
    if q < 0:
        raise ValueError("q must be nonnegative")
    if q < 2:
        return 0
    return 2 * stirling2_pairs(q) + 6 * stirling2_triples(q)
