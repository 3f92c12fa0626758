"""Degree and probability sequences across universe sizes.

`build_sequence` computes d_n(f : kind) or mu_n along a grid of n, picking
per point the best available method: exhaustive enumeration while the index
space fits under the caps, a registered closed form where one matches the
(property, signature, convention) triple, and Monte Carlo estimation
otherwise.  Each point records which method produced it; exact rationals are
kept whenever the method is not Monte Carlo.

`convergence_report` then summarizes the tail behavior against a limiting
value when one is known for the property.  It reports gaps and a trend
classification only; it never asserts that a limit exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import catalog, closedform, degrees, logic, montecarlo
from .combinatorics import binomial
from .degrees import Caps, DEFAULT_CAPS, CapExceededError
from .structures import FREE, FUNCTION, UNARY, Signature

__all__ = [
    "SequencePoint", "SampleBudget", "PointProblem", "ConvergenceReport",
    "build_sequence", "convergence_report", "sequence_to_csv",
    "closed_form_value", "limit_target", "point_to_json_dict",
]

E_INV = math.exp(-1.0)

ENUMERATION = "enumeration"
CLOSED_FORM = "closed-form"
MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class SequencePoint:
    """One computed value; exact iff the method was not Monte Carlo."""

    n: int
    value: float
    exact: Optional[Fraction]
    method: str
    ci: Optional[tuple] = None


@dataclass(frozen=True)
class SampleBudget:
    """Monte Carlo spend per point."""

    samples: int = 10**4
    seed: int = 0
    streams: int = 1
    threads: int = 1


@dataclass(frozen=True)
class PointProblem:
    """A point the policy could not compute; the sequence continues."""

    n: int
    message: str


@dataclass(frozen=True)
class ConvergenceReport:
    target: Optional[float]
    last_value: float
    last_gap: Optional[float]
    trend: str
    aitken_extrapolation: Optional[float]


# ---------------------------------------------------------------------------
# Closed forms and limiting values for the built-in properties.
#
# Both registries key off the catalog's canonical names, so any formula that
# is alpha-equivalent to a catalog entry benefits.  The limits live in one
# table on purpose: they are claims, and claims should be auditable.

def _is_no_fixed_point_sentence(f: logic.Formula) -> bool:
    probe = catalog.alpha_normal(f)
    model = catalog.alpha_normal(logic.Forall("x", catalog.build_fneq()))
    return probe == model


def _basic_signature(name: str) -> Optional[tuple]:
    """(p, signs) for u(i)/basic(...) names; None otherwise."""
    if name.startswith("u("):
        return 1, (1,)
    if name.startswith("basic("):
        inside = name[len("basic("):-1]
        left, right = inside.split(";")
        signs = tuple(int(s) for s in right.split(","))
        return len(left.split(",")), signs
    return None


def closed_form_value(
    sig: Signature,
    f: logic.Formula,
    kind: str,
    n: int,
    conv: str,
    mcount: Optional[int] = None,
) -> Optional[Fraction]:
    """Exact value by formula when one is registered for this configuration."""
    if kind == "mu" and mcount is None:
        if sig.family == FUNCTION and _is_no_fixed_point_sentence(f):
            return closedform.mu_no_fixed_points(n)
        return None
    name = catalog.identify(f, sig)
    if name is None:
        return None
    if sig.family == FUNCTION and name == "fneq":
        if kind == "typ":
            return Fraction(closedform.typ_count_no_fixed_points(n), n**n)
        if kind == "ntr" and n % 2 == 0:
            return closedform.ntr_degree_no_fixed_points(n)
        if kind == "mu" and mcount == n:
            # At least n moved points means all moved.
            return closedform.mu_no_fixed_points(n)
        return None
    if sig.family == UNARY and conv == FREE:
        shape = _basic_signature(name)
        if shape is None:
            return None
        p, _ = shape
        if p != 1:
            return None
        # One signed predicate: complementing the predicate set is a
        # count-preserving bijection, so the sign does not matter.
        if kind == "typ":
            return closedform.unary_p1_typ_degree(n)
        if kind == "ntr" and n % 2 == 0:
            return Fraction(binomial(n, n // 2), 2**n)
        if kind == "mu" and mcount is not None:
            return closedform.mu_unary_at_least(n, mcount)
    return None


def limit_target(
    sig: Signature,
    f: logic.Formula,
    kind: str,
    conv: str,
    mcount: Optional[int] = None,
) -> Optional[float]:
    """Known limiting value for the built-in properties, else None.

    Registry:
      function  fneq: typ -> 1, ntr -> 0, at-least(m) -> 1,
                the all-moved sentence -> 1/e
                ffix: typ -> 0, ntr -> 0, at-least(1) -> 1 - 1/e
      unary     one signed predicate: typ -> 1/2; two or more: typ -> 0;
                ntr -> 0 for all; at-least(m) -> 1 for one predicate
      graph     iso / adjall / adjk(k): typ -> 0, ntr -> 0,
                at-least(m >= 1) -> 0
    """
    if kind == "mu" and mcount is None:
        if sig.family == FUNCTION and _is_no_fixed_point_sentence(f):
            return E_INV
        return None
    name = catalog.identify(f, sig)
    if name is None:
        return None
    if sig.family == FUNCTION:
        if name == "fneq":
            if kind == "typ":
                return 1.0
            if kind == "ntr":
                return 0.0
            if kind == "mu" and mcount is not None and mcount >= 1:
                return 1.0
        if name == "ffix":
            if kind in ("typ", "ntr"):
                return 0.0
            if kind == "mu" and mcount == 1:
                return 1.0 - E_INV
        return None
    if sig.family == UNARY:
        shape = _basic_signature(name)
        if shape is None:
            return None
        p, _ = shape
        if kind == "typ":
            return 0.5 if p == 1 else 0.0
        if kind == "ntr":
            return 0.0
        if kind == "mu" and p == 1 and mcount is not None and mcount >= 1:
            return 1.0
        return None
    if name in ("iso", "adjall") or name.startswith("adjk("):
        if kind in ("typ", "ntr"):
            return 0.0
        if kind == "mu" and mcount is not None and mcount >= 1:
            return 0.0
    return None


# ---------------------------------------------------------------------------
# Sequence construction

def _exact_point(sig, n, f, kind, conv, caps, mcount, threads) -> SequencePoint:
    if kind == "typ":
        rep = degrees.typicality_degree(sig, n, f, conv, caps, threads=threads)
    elif kind == "ntr":
        rep = degrees.neutrality_degree(sig, n, f, conv, caps, threads=threads)
    elif kind == "mu":
        rep = degrees.truth_probability(
            sig, n, f, mcount=mcount, conv=conv, caps=caps, threads=threads
        )
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return SequencePoint(
        n=n, value=rep.float_value, exact=rep.value, method=ENUMERATION
    )


def _mc_point(sig, n, f, kind, conv, budget, stream_base) -> SequencePoint:
    if kind[0] == "m":
        est = montecarlo.estimate_truth_probability(
            sig, n, f,
            mcount=kind[1],
            samples=budget.samples,
            seed=budget.seed,
            conv=conv,
            streams=budget.streams,
            base_stream=stream_base,
            threads=budget.threads,
        )
    else:
        est = montecarlo.estimate_degree(
            sig, n, f, kind[0],
            samples=budget.samples,
            seed=budget.seed,
            conv=conv,
            streams=budget.streams,
            base_stream=stream_base,
            threads=budget.threads,
        )
    return SequencePoint(
        n=n,
        value=est.point,
        exact=None,
        method=MONTE_CARLO,
        ci=(est.ci_low, est.ci_high),
    )


def build_sequence(
    sig: Signature,
    f: logic.Formula,
    kind: str,
    n_list: list,
    conv: str = FREE,
    method_policy: str = "auto",
    budget: Optional[SampleBudget] = None,
    caps: Caps = DEFAULT_CAPS,
    mcount: Optional[int] = None,
    threads: int = 1,
) -> tuple:
    """Compute the sequence along n_list; returns (points, problems).

    Policy "auto" prefers enumeration under the caps, then a registered
    closed form, then Monte Carlo with the given budget.  The named
    policies force one method and record a problem for every point where
    it does not apply.  Neutrality grids keep only even n.
    """
    if list(n_list) != sorted(set(n_list)) or not n_list:
        raise ValueError("n_list must be nonempty and strictly increasing")
    if kind not in ("typ", "ntr", "mu"):
        raise ValueError(f"unknown kind {kind!r}")
    if method_policy not in ("auto", ENUMERATION, CLOSED_FORM, MONTE_CARLO):
        raise ValueError(f"unknown method policy {method_policy!r}")
    if budget is None:
        budget = SampleBudget()
    grid = [n for n in n_list if not (kind == "ntr" and n % 2)]
    mc_kind = ("mu", mcount) if kind == "mu" else (kind, None)

    points: list = []
    problems: list = []
    for slot, n in enumerate(grid):
        stream_base = slot * budget.streams
        try:
            if method_policy in ("auto", ENUMERATION):
                try:
                    points.append(
                        _exact_point(sig, n, f, kind, conv, caps, mcount, threads)
                    )
                    continue
                except CapExceededError:
                    if method_policy == ENUMERATION:
                        raise
            if method_policy in ("auto", CLOSED_FORM):
                exact = closed_form_value(sig, f, kind, n, conv, mcount)
                if exact is not None:
                    points.append(
                        SequencePoint(
                            n=n, value=float(exact), exact=exact,
                            method=CLOSED_FORM,
                        )
                    )
                    continue
                if method_policy == CLOSED_FORM:
                    raise ValueError("no registered closed form for this point")
            points.append(
                _mc_point(sig, n, f, mc_kind, conv, budget, stream_base)
            )
        except Exception as exc:  # per-point failure, sequence continues
            problems.append(PointProblem(n=n, message=str(exc)))
    return points, problems


# ---------------------------------------------------------------------------
# Convergence diagnostics

def _aitken(points: list) -> Optional[float]:
    """Delta-squared extrapolation from the last three non-sampled points."""
    run: list = []
    for point in points:
        if point.exact is not None:
            run.append(point.value)
        else:
            run = []
    if len(run) < 3:
        return None
    x0, x1, x2 = run[-3], run[-2], run[-1]
    denom = (x2 - x1) - (x1 - x0)
    if abs(denom) < 1e-300:
        return None
    return x2 - (x2 - x1) ** 2 / denom


def convergence_report(
    points: list, target: Optional[float] = None
) -> ConvergenceReport:
    """Tail summary of a sequence; needs at least 3 points.

    The trend looks at the last max(3, half) gaps: non-increasing means
    "decreasing-gap", anything else "non-monotone"; without a target there
    is nothing to measure against and the trend is "inconclusive".
    """
    if len(points) < 3:
        raise ValueError("convergence needs at least 3 points")
    last_value = points[-1].value
    if target is None:
        return ConvergenceReport(
            target=None,
            last_value=last_value,
            last_gap=None,
            trend="inconclusive",
            aitken_extrapolation=_aitken(points),
        )
    gaps = [abs(p.value - target) for p in points]
    window = max(3, (len(gaps) + 1) // 2)
    tail = gaps[-window:]
    monotone = all(b <= a for a, b in zip(tail, tail[1:]))
    return ConvergenceReport(
        target=target,
        last_value=last_value,
        last_gap=gaps[-1],
        trend="decreasing-gap" if monotone else "non-monotone",
        aitken_extrapolation=_aitken(points),
    )


# ---------------------------------------------------------------------------
# Serialization

CSV_HEADER = "n,kind,method,value,exact,ci_low,ci_high,target,gap"


def _fmt_float(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def sequence_to_csv(points: list, kind: str, target: Optional[float] = None) -> str:
    lines = [CSV_HEADER]
    for p in points:
        exact = "" if p.exact is None else f"{p.exact.numerator}/{p.exact.denominator}"
        ci_low, ci_high = ("", "") if p.ci is None else map(_fmt_float, p.ci)
        gap = "" if target is None else _fmt_float(abs(p.value - target))
        lines.append(
            ",".join(
                [
                    str(p.n), kind, p.method, _fmt_float(p.value), exact,
                    ci_low, ci_high, _fmt_float(target), gap,
                ]
            )
        )
    return "\n".join(lines) + "\n"


def point_to_json_dict(
    point: SequencePoint, kind: str, target: Optional[float] = None
) -> dict:
    exact = point.exact
    return {
        "n": point.n,
        "kind": kind,
        "method": point.method,
        "value": point.value,
        "exact": None if exact is None else f"{exact.numerator}/{exact.denominator}",
        "ci_low": None if point.ci is None else point.ci[0],
        "ci_high": None if point.ci is None else point.ci[1],
        "target": target,
        "gap": None if target is None else abs(point.value - target),
    }
