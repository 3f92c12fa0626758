"""Uniform-sampling estimates of degrees and truth probabilities.

For sizes past the enumeration caps the only honest output is a point
estimate with a confidence interval.  Structures are drawn i.i.d. uniform
(per convention), favorable outcomes counted exactly, and the interval is
the Wilson score at 95%.  Everything is deterministic given (seed, stream
layout): stream s uses the generator seeded by SeedSequence(seed,
spawn_key=(s,)), and the total favorable count is the sum of per-stream
counts, so a parallel run equals the sequential run with the same streams.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import batcheval, logic
from .structures import FREE, Signature

# Generator family is pinned; recorded in every estimate and manifest so a
# reader can reproduce the exact draw sequence.
GENERATOR_ID = "pcg64-seedseq1"

# Norm quantile for the 95% two-sided interval, fixed to the binary64 value
# so serialized intervals never drift across platforms.
Z_95 = 1.959963984540054

MIN_SAMPLES = 100


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """The pinned generator for (seed, stream)."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream,))
    return np.random.Generator(np.random.PCG64(ss))


def wilson_interval(favorable: int, samples: int) -> tuple:
    """Wilson score interval at 95% for a binomial proportion.

    Chosen over the normal approximation because the degrees of interest
    cluster at 0 and 1 where the Wald interval degenerates.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    if not 0 <= favorable <= samples:
        raise ValueError("favorable outside [0, samples]")
    p = favorable / samples
    z2 = Z_95 * Z_95
    denom = 1.0 + z2 / samples
    center = p + z2 / (2.0 * samples)
    spread = Z_95 * math.sqrt(p * (1.0 - p) / samples + z2 / (4.0 * samples * samples))
    low = (center - spread) / denom
    high = (center + spread) / denom
    return (max(0.0, min(low, p)), min(1.0, max(high, p)))


@dataclass(frozen=True)
class Estimate:
    """Sampling result; point = favorable/samples, ci_low <= point <= ci_high."""

    kind: str
    n: int
    point: float
    ci_low: float
    ci_high: float
    samples: int
    favorable: int
    seed: int
    streams: int
    convention: str
    formula_text: str
    method: str = "monte-carlo"
    generator: str = GENERATOR_ID


def estimate_to_json_dict(est: Estimate) -> dict:
    return {
        "kind": est.kind,
        "n": est.n,
        "point": est.point,
        "ci_low": est.ci_low,
        "ci_high": est.ci_high,
        "samples": est.samples,
        "favorable": est.favorable,
        "seed": est.seed,
        "streams": est.streams,
        "convention": est.convention,
        "formula_text": est.formula_text,
        "method": est.method,
        "generator": est.generator,
    }


def estimate_to_json(est: Estimate) -> str:
    return json.dumps(estimate_to_json_dict(est), sort_keys=True)


def _stream_sizes(samples: int, streams: int) -> list:
    base, extra = divmod(samples, streams)
    return [base + (1 if i < extra else 0) for i in range(streams)]


def _count(
    sig: Signature,
    n: int,
    conv: str,
    f: logic.Formula,
    kind: str,
    mcount: Optional[int],
    samples: int,
    seed: int,
    streams: int,
    base_stream: int,
    threads: int,
) -> int:
    sizes = _stream_sizes(samples, streams)

    def one(i: int) -> int:
        if sizes[i] == 0:
            return 0
        rng = make_rng(seed, base_stream + i)
        return batcheval.count_samples(
            sig, n, conv, f, rng, sizes[i], kind, mcount=mcount
        )

    if threads > 1 and streams > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(one, range(streams)))
    return sum(one(i) for i in range(streams))


def _finish(kind, n, favorable, samples, seed, streams, conv, f) -> Estimate:
    low, high = wilson_interval(favorable, samples)
    return Estimate(
        kind=kind,
        n=n,
        point=favorable / samples,
        ci_low=low,
        ci_high=high,
        samples=samples,
        favorable=favorable,
        seed=seed,
        streams=streams,
        convention=conv,
        formula_text=logic.render(f),
    )


def estimate_degree(
    sig: Signature,
    n: int,
    f: logic.Formula,
    kind: str,
    samples: int,
    seed: int,
    conv: str = FREE,
    streams: int = 1,
    base_stream: int = 0,
    threads: int = 1,
) -> Estimate:
    """Estimated d_n(f : kind) from i.i.d. uniform structures."""
    if kind not in ("typ", "ntr"):
        raise ValueError(f"kind must be 'typ' or 'ntr', got {kind!r}")
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if kind == "ntr" and n % 2:
        raise ValueError(f"neutrality needs an even universe size, got n = {n}")
    if streams < 1:
        raise ValueError("streams must be >= 1")
    if not logic.free_variables(f):
        raise logic.FreeVariableError("degree estimation needs a property, not a sentence")
    favorable = _count(
        sig, n, conv, f, kind, None, samples, seed, streams, base_stream, threads
    )
    return _finish(kind, n, favorable, samples, seed, streams, conv, f)


def estimate_truth_probability(
    sig: Signature,
    n: int,
    f: logic.Formula,
    mcount: Optional[int] = None,
    samples: int = 10**4,
    seed: int = 0,
    conv: str = FREE,
    streams: int = 1,
    base_stream: int = 0,
    threads: int = 1,
) -> Estimate:
    """Estimated mu_n of a sentence, or of "f has at least mcount witnesses"."""
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if streams < 1:
        raise ValueError("streams must be >= 1")
    free = logic.free_variables(f)
    if mcount is None:
        if free:
            raise logic.FreeVariableError(
                "free variables need a witness count (mcount) for mu"
            )
        kind = "mu"
    else:
        if mcount < 0:
            raise ValueError("witness count must be nonnegative")
        if not free:
            raise logic.FreeVariableError("mcount applies to properties, not sentences")
        kind = f"mu-at-least({mcount})"
        if mcount == 0:
            # At-least-zero holds in every structure; no need to draw.
            return Estimate(
                kind=kind,
                n=n,
                point=1.0,
                ci_low=1.0,
                ci_high=1.0,
                samples=samples,
                favorable=samples,
                seed=seed,
                streams=streams,
                convention=conv,
                formula_text=logic.render(f),
            )
    favorable = _count(
        sig, n, conv, f, "mu", mcount, samples, seed, streams, base_stream, threads
    )
    return _finish(kind, n, favorable, samples, seed, streams, conv, f)
