"""Self-check suites behind the CLI `verify` subcommand.

Each check recomputes something two independent ways (formula vs brute
force, closed form vs enumeration, bound vs exact value) and reports a
CheckResult with counterexample details on failure.  The suites double as
the shared test matrix: MATRIX lists every enumerable configuration the
identity checks sweep, MC_MATRIX the configurations sampling coverage is
measured on.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import catalog, closedform, degrees, logic, montecarlo
from .combinatorics import (
    binomial,
    central_binomial_within_bound,
    falling_factorial,
    half_binomial_sum,
    stirling2,
    stirling2_pairs,
    stirling2_triples,
)
from .structures import DISTINCT, FREE, FUNCTION, GRAPH, UNARY, Signature

__all__ = ["CheckResult", "MATRIX", "MC_MATRIX", "SUITES", "run_suites"]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    details: str = ""


def _result(suite: str, name: str, failures: list) -> CheckResult:
    if failures:
        return CheckResult(suite, name, False, "; ".join(failures[:5]))
    return CheckResult(suite, name, True)


# Enumerable configurations: (signature, convention, n, catalog name).
MATRIX = [
    (Signature(FUNCTION), FREE, 2, "fneq"),
    (Signature(FUNCTION), FREE, 3, "fneq"),
    (Signature(FUNCTION), FREE, 4, "fneq"),
    (Signature(UNARY, k=1), FREE, 3, "u(1)"),
    (Signature(UNARY, k=1), FREE, 4, "u(1)"),
    (Signature(UNARY, k=1), DISTINCT, 3, "u(1)"),
    (Signature(UNARY, k=2), FREE, 3, "basic(1,2;1,0)"),
    (Signature(UNARY, k=2), DISTINCT, 3, "basic(1,2;1,0)"),
    (Signature(GRAPH), FREE, 3, "iso"),
    (Signature(GRAPH), FREE, 4, "iso"),
]

# Sampling-coverage configurations: (signature, convention, n, name, kind,
# mcount).  All exactly enumerable, so the interval can be scored against
# the true value.
MC_MATRIX = [
    (Signature(FUNCTION), FREE, 3, "fneq", "typ", None),
    (Signature(FUNCTION), FREE, 4, "fneq", "ntr", None),
    (Signature(UNARY, k=1), FREE, 3, "u(1)", "typ", None),
    (Signature(UNARY, k=2), DISTINCT, 3, "basic(1,2;1,0)", "typ", None),
    (Signature(GRAPH), FREE, 3, "iso", "mu", 1),
]


def _exact_value(sig, conv, n, name, kind, mcount) -> Fraction:
    f = catalog.resolve(name, sig)
    if kind == "typ":
        return degrees.typicality_degree(sig, n, f, conv).value
    if kind == "ntr":
        return degrees.neutrality_degree(sig, n, f, conv).value
    return degrees.truth_probability(sig, n, f, mcount=mcount, conv=conv).value


# ---------------------------------------------------------------------------
# Brute-force oracles kept deliberately naive.

def _partition_block_histogram(n: int) -> dict:
    """{block count: set partitions of an n-set}, by inserting elements one
    at a time (each joins an existing block or opens a new one)."""
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


def _disjoint_pairs_brute(q: int) -> int:
    count = 0
    for labels in itertools.product((0, 1, 2), repeat=q):
        if 1 in labels and 2 in labels:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Suites

def combinatorics_suite() -> list:
    checks = []

    fails = [
        f"C({n},{k})"
        for n in range(1, 21)
        for k in range(1, n + 1)
        if binomial(n, k) != binomial(n - 1, k - 1) + binomial(n - 1, k)
    ]
    checks.append(_result("combinatorics", "pascal-identity", fails))

    fails = [
        f"n={n}"
        for n in range(0, 41)
        if sum(binomial(n, k) for k in range(n + 1)) != 2**n
    ]
    checks.append(_result("combinatorics", "binomial-row-sum", fails))

    fails = [
        f"n={n},k={k}"
        for n in range(0, 21)
        for k in range(0, n + 1)
        if falling_factorial(n, k) * math.factorial(n - k) != math.factorial(n)
    ]
    checks.append(_result("combinatorics", "falling-factorial-product", fails))

    fails = []
    for n in range(0, 10):
        histogram = _partition_block_histogram(n)
        for k in range(0, n + 1):
            if stirling2(n, k) != histogram.get(k, 0):
                fails.append(f"n={n},k={k}")
    checks.append(_result("combinatorics", "stirling2-vs-brute-force", fails))

    fails = []
    for n in range(3, 41):
        if stirling2(n, 2) != stirling2_pairs(n):
            fails.append(f"pairs n={n}")
        if stirling2(n, 3) != stirling2_triples(n):
            fails.append(f"triples n={n}")
    checks.append(_result("combinatorics", "stirling2-closed-forms", fails))

    fails = []
    for n in range(1, 65):
        expect = (
            2 ** (n - 1)
            if n % 2
            else 2 ** (n - 1) - binomial(n, n // 2) // 2
        )
        if half_binomial_sum(n) != expect:
            fails.append(f"n={n}")
    checks.append(_result("combinatorics", "half-binomial-sum", fails))

    fails = [
        f"n={n}"
        for n in range(1, 301)
        if not central_binomial_within_bound(n).holds
    ]
    checks.append(_result("combinatorics", "central-binomial-bound", fails))

    fails = []
    for q in range(0, 10):
        brute = _disjoint_pairs_brute(q)
        if closedform.disjoint_pair_count(q) != brute:
            fails.append(f"q={q} formula {closedform.disjoint_pair_count(q)} != {brute}")
        if closedform.disjoint_pair_count_stirling(q) != brute:
            fails.append(f"q={q} stirling route != {brute}")
    checks.append(_result("combinatorics", "disjoint-pair-count", fails))

    return checks


def partition_suite() -> list:
    checks = []
    for sig, conv, n, name in MATRIX:
        f = catalog.resolve(name, sig)
        label = f"partition[{sig.describe()},{conv},n={n},{name}]"
        try:
            degrees.partition_identity_check(sig, n, f, conv)
        except ArithmeticError as exc:
            checks.append(CheckResult("partition", label, False, str(exc)))
        else:
            checks.append(CheckResult("partition", label, True))
    return checks


def oracle_suite() -> list:
    checks = []
    sig_f = Signature(FUNCTION)
    fneq = catalog.build_fneq()

    fails = []
    for n in range(1, 7):
        enum = degrees.typicality_degree(sig_f, n, fneq).favorable
        formula = closedform.typ_count_no_fixed_points(n)
        if enum != formula:
            fails.append(f"n={n}: enumerated {enum} != formula {formula}")
    checks.append(_result("oracles", "moved-majority-count", fails))

    fails = []
    for two_n in (2, 4, 6):
        enum = degrees.neutrality_degree(sig_f, two_n, fneq).favorable
        formula = closedform.ntr_count_no_fixed_points(two_n)
        if enum != formula:
            fails.append(f"n={two_n}: enumerated {enum} != formula {formula}")
    checks.append(_result("oracles", "moved-half-count", fails))

    sentence = logic.Forall("x", fneq)
    fails = []
    for n in range(1, 7):
        enum = degrees.truth_probability(sig_f, n, sentence).value
        formula = closedform.mu_no_fixed_points(n)
        if enum != formula:
            fails.append(f"n={n}: enumerated {enum} != formula {formula}")
    checks.append(_result("oracles", "all-moved-probability", fails))

    sig_u = Signature(UNARY, k=1)
    u1 = catalog.build_u(1)
    fails = []
    for n in range(1, 11):
        enum = degrees.typicality_degree(sig_u, n, u1).value
        formula = closedform.unary_p1_typ_degree(n)
        if enum != formula:
            fails.append(f"n={n}: enumerated {enum} != formula {formula}")
    checks.append(_result("oracles", "single-predicate-majority", fails))

    fails = []
    for n in range(1, 9):
        for m in (0, 1, 2, n):
            enum = degrees.truth_probability(sig_u, n, u1, mcount=m).value
            formula = closedform.mu_unary_at_least(n, m)
            if enum != formula:
                fails.append(f"n={n},m={m}: {enum} != {formula}")
    checks.append(_result("oracles", "predicate-witness-probability", fails))

    fails = []
    for n in range(2, 61):
        factors = closedform.euler_factor_terms(n)
        direct = Fraction(closedform.typ_count_no_fixed_points(n), n**n)
        if factors.product != direct:
            fails.append(f"n={n}")
    checks.append(_result("oracles", "factored-degree-identity", fails))

    return checks


def bounds_suite() -> list:
    checks = []
    sig_f = Signature(FUNCTION)
    ffix = catalog.build_ffix()

    fails = []
    for n in range(1, 7):
        for m in range(1, min(3, n) + 1):
            mu = degrees.truth_probability(sig_f, n, ffix, mcount=m).value
            pair = closedform.fixed_point_mu_bounds(n, m)
            if not pair.lower <= mu <= pair.upper:
                fails.append(f"n={n},m={m}: {mu} outside [{pair.lower},{pair.upper}]")
    checks.append(_result("bounds", "fixed-point-bracketing", fails))

    sig_g = Signature(GRAPH)
    fails = []
    for n in range(2, 6):
        cases = [("iso", "isolated"), ("adjall", "all-adjacent")]
        cases += [(f"adjk({k})", f"exactly-k({k})") for k in (1, 2, 3) if k <= n - 1]
        for name, which in cases:
            f = catalog.resolve(name, sig_g)
            mu = degrees.truth_probability(sig_g, n, f, mcount=1).value
            if which.startswith("exactly"):
                k = int(which[10:-1])
                bound = closedform.graph_witness_bound(n, "exactly-k", k)
            else:
                bound = closedform.graph_witness_bound(n, which)
            if mu > bound:
                fails.append(f"n={n},{name}: {mu} > bound {bound}")
    checks.append(_result("bounds", "graph-witness-bounds", fails))

    fails = []
    for two_n in range(2, 61, 2):
        degree = closedform.ntr_degree_no_fixed_points(two_n)
        bound = closedform.ntr_degree_bound_no_fixed_points(two_n)
        if float(degree) > bound:
            fails.append(f"n={two_n}: {float(degree)} > {bound}")
    checks.append(_result("bounds", "moved-half-degree-bound", fails))

    return checks


def sampling_suite() -> list:
    checks = []
    sig_f = Signature(FUNCTION)
    fneq = catalog.build_fneq()

    a = montecarlo.estimate_degree(sig_f, 3, fneq, "typ", samples=2000, seed=11)
    b = montecarlo.estimate_degree(sig_f, 3, fneq, "typ", samples=2000, seed=11)
    same = montecarlo.estimate_to_json(a) == montecarlo.estimate_to_json(b)
    checks.append(
        CheckResult(
            "sampling", "determinism", same,
            "" if same else "same seed gave different serialized estimates",
        )
    )

    split = montecarlo.estimate_degree(
        sig_f, 3, fneq, "typ", samples=2000, seed=11, streams=4
    )
    manual = 0
    for i, size in enumerate((500, 500, 500, 500)):
        rng = montecarlo.make_rng(11, i)
        manual += montecarlo.batcheval.count_samples(
            sig_f, 3, FREE, fneq, rng, size, "typ"
        )
    same = split.favorable == manual
    checks.append(
        CheckResult(
            "sampling", "stream-splitting", same,
            "" if same else f"streamed {split.favorable} != sequential {manual}",
        )
    )

    fails = []
    for sig, conv, n, name, kind, mcount in MC_MATRIX:
        f = catalog.resolve(name, sig)
        exact = float(_exact_value(sig, conv, n, name, kind, mcount))
        hits = 0
        seeds = 40
        for seed in range(seeds):
            if kind == "mu":
                est = montecarlo.estimate_truth_probability(
                    sig, n, f, mcount=mcount, samples=400, seed=seed, conv=conv
                )
            else:
                est = montecarlo.estimate_degree(
                    sig, n, f, kind, samples=400, seed=seed, conv=conv
                )
            if est.ci_low <= exact <= est.ci_high:
                hits += 1
        if hits < 0.85 * seeds:
            fails.append(
                f"{sig.describe()},{conv},n={n},{name},{kind}: {hits}/{seeds} cover"
            )
    checks.append(_result("sampling", "interval-coverage", fails))

    est = montecarlo.estimate_truth_probability(
        sig_f, 5, fneq, mcount=0, samples=500, seed=3
    )
    ok = est.point == 1.0 and est.favorable == est.samples
    checks.append(
        CheckResult(
            "sampling", "vacuous-witness-count", ok,
            "" if ok else json.dumps(montecarlo.estimate_to_json_dict(est)),
        )
    )

    return checks


SUITES = {
    "identities": (
        combinatorics_suite, partition_suite, oracle_suite, bounds_suite
    ),
    "sampling": (sampling_suite,),
}
SUITES["all"] = SUITES["identities"] + SUITES["sampling"]


def run_suites(name: str) -> list:
    """All CheckResults for the named suite collection."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    results: list = []
    for suite in SUITES[name]:
        results.extend(suite())
    return results
