"""Exact combinatorial kernels used by the counting layers.

Everything here returns Python ints or Fractions, never floats, except where a
binary64 companion value is explicitly part of the contract.  All identities
that the rest of the package leans on (Pascal, row sums, the half-row sum with
and without the central term, the Stirling division guard) are exercised by the
test suite against independent brute-force oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "binomial",
    "falling_factorial",
    "stirling2",
    "stirling2_pairs",
    "stirling2_triples",
    "half_binomial_sum",
    "CentralBinomialCheck",
    "central_binomial_within_bound",
]

# Rational upper bound on pi, enough headroom for exact bound certificates.
_PI_UPPER = Fraction(3141592653589793239, 10**18)


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("binomial requires n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling_factorial(n: int, k: int) -> int:
    """(n)_k = n (n-1) ... (n-k+1); (n)_0 = 1.

    n may be any nonnegative integer, including very large ones such as
    2^m - 2; k must be nonnegative.
    """
    if k < 0:
        raise ValueError("falling factorial requires k >= 0")
    result = 1
    for i in range(k):
        result *= n - i
        if result == 0:
            break
    return result


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind via the explicit alternating sum.

    {n k} = (1/k!) * sum_{i=0}^{k} (-1)^(k-i) C(k,i) i^n.

    The division by k! must be exact; a nonzero remainder means the sum was
    formed wrongly, so it raises instead of truncating.
    """
    if n < 0 or k < 0:
        raise ValueError("stirling2 requires n, k >= 0")
    total = 0
    for i in range(k + 1):
        term = math.comb(k, i) * i**n
        if (k - i) % 2:
            total -= term
        else:
            total += term
    q, r = divmod(total, math.factorial(k))
    if r:
        raise ArithmeticError(f"inexact Stirling division for n={n}, k={k}")
    return q


def stirling2_pairs(n: int) -> int:
    """{n 2} = 2^(n-1) - 1 for n >= 1 (number of 2-part set partitions)."""
    if n < 1:
        raise ValueError("stirling2_pairs requires n >= 1")
    return 2 ** (n - 1) - 1


def stirling2_triples(n: int) -> int:
    """{n 3} = (3 - 3*2^n + 3^n) / 6 for n >= 1; the division is exact."""
    if n < 1:
        raise ValueError("stirling2_triples requires n >= 1")
    q, r = divmod(3 - 3 * 2**n + 3**n, 6)
    if r:
        raise ArithmeticError(f"inexact 3-part Stirling division for n={n}")
    return q


def half_binomial_sum(n: int) -> int:
    """sum of C(n, k) over 0 <= k < n/2 (strict half, exact comparison).

    Equals 2^(n-1) for odd n, and 2^(n-1) - C(n, n/2)/2 for even n.
    """
    if n < 0:
        raise ValueError("half_binomial_sum requires n >= 0")
    total = 0
    term = 1  # C(n, 0), advanced by the ratio C(n,k+1)/C(n,k) = (n-k)/(k+1)
    k = 0
    while 2 * k < n:
        total += term
        term = term * (n - k) // (k + 1)
        k += 1
    return total


@dataclass(frozen=True)
class CentralBinomialCheck:
    """Exact central binomial C(2n, n), its float bound 4^n/sqrt(pi n), and
    whether the inequality C(2n, n) <= 4^n/sqrt(pi n) holds."""

    value: int
    bound: float
    holds: bool


def central_binomial_within_bound(n: int) -> CentralBinomialCheck:
    """Check C(2n, n) <= 4^n / sqrt(pi n) for n >= 1.

    The boolean is decided exactly: the inequality is squared to
    C(2n,n)^2 * pi * n <= 16^n and tested with a rational upper bound on pi,
    so float overflow in the reported bound (inf for large n) never affects
    the verdict.
    """
    if n < 1:
        raise ValueError("central binomial bound requires n >= 1")
    value = math.comb(2 * n, n)
    try:
        bound = 4.0**n / math.sqrt(math.pi * n)
    except OverflowError:
        bound = math.inf
    holds = value * value * n * _PI_UPPER <= 16**n
    return CentralBinomialCheck(value=value, bound=bound, holds=holds)


def exact_ratio(numerator: int, denominator: int) -> Fraction:
    """Fraction in lowest terms; the single place counts become degrees."""
    if denominator <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(numerator, denominator)
