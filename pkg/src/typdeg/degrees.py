"""Exact typicality, neutrality, and truth-probability degrees.

Degrees are ratios of exact structure counts:

    typicality   |{M : |f(M)| > n/2}|  / |S_n(L)|
    neutrality   |{M : |f(M)| = n/2}|  / |S_n(L)|   (even n only)
    truth        |{M : M satisfies s}| / |S_n(L)|

All comparisons against n/2 are exact integer comparisons.  Counting is one
pass over the index space, folding every requested counter simultaneously;
results are independent of chunking and thread count.  Spaces beyond the caps
are refused with a pointer to Monte Carlo estimation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import batcheval, logic
from .structures import FREE, FUNCTION, GRAPH, UNARY, Signature

__all__ = [
    "Caps",
    "DEFAULT_CAPS",
    "CapExceededError",
    "DegreeReport",
    "PartitionIdentity",
    "typicality_degree",
    "neutrality_degree",
    "truth_probability",
    "partition_identity_check",
    "report_to_json_dict",
]


@dataclass(frozen=True)
class Caps:
    """Enumeration ceilings: unary counts index bits (k*n), the others n."""

    unary_bits: int = 24
    function_n: int = 8
    graph_n: int = 7

    def check(self, sig: Signature, n: int) -> None:
        if sig.family == UNARY:
            bits = sig.k * n
            if bits > self.unary_bits:
                raise CapExceededError(
                    f"unary index space needs {bits} bits, cap is "
                    f"{self.unary_bits}; use Monte Carlo sampling instead"
                )
        elif sig.family == FUNCTION:
            if n > self.function_n:
                raise CapExceededError(
                    f"function enumeration capped at n = {self.function_n}, "
                    f"got {n}; use Monte Carlo sampling instead"
                )
        elif sig.family == GRAPH:
            if n > self.graph_n:
                raise CapExceededError(
                    f"graph enumeration capped at n = {self.graph_n}, "
                    f"got {n}; use Monte Carlo sampling instead"
                )


DEFAULT_CAPS = Caps()


class CapExceededError(ValueError):
    """Enumeration request beyond the configured caps."""


@dataclass(frozen=True)
class DegreeReport:
    """Exact degree with its counts and provenance."""

    kind: str
    n: int
    favorable: int
    total: int
    value: Fraction
    float_value: float
    method: str
    convention: str
    formula_text: str


def report_to_json_dict(report: DegreeReport) -> dict:
    """Counts as decimal strings (they outgrow JSON numbers), value as p/q."""
    return {
        "kind": report.kind,
        "n": report.n,
        "favorable": str(report.favorable),
        "total": str(report.total),
        "value": f"{report.value.numerator}/{report.value.denominator}",
        "float_value": report.float_value,
        "method": report.method,
        "convention": report.convention,
        "formula_text": report.formula_text,
    }


def _report(kind, n, favorable, total, conv, f) -> DegreeReport:
    value = Fraction(favorable, total)
    return DegreeReport(
        kind=kind,
        n=n,
        favorable=favorable,
        total=total,
        value=value,
        float_value=float(value),
        method="enumeration",
        convention=conv,
        formula_text=logic.render(f),
    )


def _scan(sig, n, conv, f, caps, mcounts=(), chunk_size=None, threads=1):
    caps.check(sig, n)
    return batcheval.scan(
        sig, n, conv, f, mcounts=mcounts, chunk_size=chunk_size, threads=threads
    )


def typicality_degree(
    sig: Signature,
    n: int,
    f: logic.Formula,
    conv: str = FREE,
    caps: Caps = DEFAULT_CAPS,
    chunk_size: Optional[int] = None,
    threads: int = 1,
) -> DegreeReport:
    """d_n(f : typ) by exhaustive enumeration."""
    counts = _scan(sig, n, conv, f, caps, chunk_size=chunk_size, threads=threads)
    return _report("typ", n, counts.typical, counts.total, conv, f)


def neutrality_degree(
    sig: Signature,
    n: int,
    f: logic.Formula,
    conv: str = FREE,
    caps: Caps = DEFAULT_CAPS,
    chunk_size: Optional[int] = None,
    threads: int = 1,
) -> DegreeReport:
    """d_n(f : ntr) by exhaustive enumeration; defined for even n only."""
    if n % 2:
        raise ValueError(f"neutrality needs an even universe size, got n = {n}")
    counts = _scan(sig, n, conv, f, caps, chunk_size=chunk_size, threads=threads)
    return _report("ntr", n, counts.neutral, counts.total, conv, f)


def truth_probability(
    sig: Signature,
    n: int,
    f: logic.Formula,
    mcount: Optional[int] = None,
    conv: str = FREE,
    caps: Caps = DEFAULT_CAPS,
    chunk_size: Optional[int] = None,
    threads: int = 1,
) -> DegreeReport:
    """mu_n of a sentence, or of "f has at least mcount witnesses".

    A sentence takes no mcount; a property requires one.
    """
    free = logic.free_variables(f)
    if mcount is None:
        if free:
            raise logic.FreeVariableError(
                "free variables need a witness count (mcount) for mu"
            )
        counts = _scan(sig, n, conv, f, caps, chunk_size=chunk_size, threads=threads)
        return _report("mu", n, counts.true_count, counts.total, conv, f)
    if mcount < 0:
        raise ValueError("witness count must be nonnegative")
    if not free:
        raise logic.FreeVariableError("mcount applies to properties, not sentences")
    counts = _scan(
        sig, n, conv, f, caps, mcounts=(mcount,),
        chunk_size=chunk_size, threads=threads,
    )
    return _report(
        f"mu-at-least({mcount})", n, counts.at_least[mcount], counts.total, conv, f
    )


@dataclass(frozen=True)
class PartitionIdentity:
    """The exact decomposition of 1 into typical/negated-typical(/neutral)."""

    n: int
    typical: Fraction
    negated_typical: Fraction
    neutral: Optional[Fraction]


def partition_identity_check(
    sig: Signature,
    n: int,
    f: logic.Formula,
    conv: str = FREE,
    caps: Caps = DEFAULT_CAPS,
) -> PartitionIdentity:
    """Verify d(f:typ) + d(!f:typ) (+ d(f:ntr) for even n) = 1 exactly.

    The negated degree comes from its own scan of !f, not from complementing
    counters, so the identity genuinely exercises the evaluator.  Raises
    ArithmeticError on violation.
    """
    typ = typicality_degree(sig, n, f, conv, caps)
    neg = typicality_degree(sig, n, logic.Not(f), conv, caps)
    neutral = None
    total = typ.value + neg.value
    if n % 2 == 0:
        neutral = neutrality_degree(sig, n, f, conv, caps).value
        total += neutral
    if total != 1:
        raise ArithmeticError(
            f"partition identity violated at n={n}: sum = {total}"
        )
    return PartitionIdentity(
        n=n, typical=typ.value, negated_typical=neg.value, neutral=neutral
    )
