"""Command-line front end.

Subcommands:
    degree     exact typicality/neutrality degree at one universe size
    mu         exact truth probability (sentence, or property + witness count)
    sample     Monte Carlo estimate with a Wilson 95% interval
    sequence   values along an n grid with method selection, convergence
               summary, optional figure
    verify     run the self-check suites
    formulas   list the built-in property catalog for a signature

Configuration taken from, in increasing precedence: a key=value config file
(--config, default ./typdeg.cfg when present), command-line flags, then
TYPDEG_* environment variables.  Machine-readable output goes to --out in
json, csv, or jsonl-append format; every run is stamped with a manifest
(version, argv, signature, seed, generator, caps, timestamp) sufficient to
reproduce it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Optional

from . import analysis, catalog, degrees, logic, montecarlo, verification
from .degrees import Caps, CapExceededError, DegreeReport, report_to_json_dict
from .montecarlo import GENERATOR_ID, Estimate, estimate_to_json_dict
from .structures import (
    CONVENTIONS,
    FREE,
    FUNCTION,
    GRAPH,
    UNARY,
    InfeasibleConventionError,
    Signature,
)

VERSION = "0.1.0"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

_USAGE_ERRORS = (
    ValueError,
    CapExceededError,
    logic.ParseError,
    logic.SignatureError,
    logic.FreeVariableError,
    InfeasibleConventionError,
)


# ---------------------------------------------------------------------------
# Settings: config file < flags < environment

@dataclass(frozen=True)
class Settings:
    seed: int = 0
    outdir: str = "."
    threads: int = 0  # 0 means machine parallelism
    caps: Caps = degrees.DEFAULT_CAPS

    def effective_threads(self) -> int:
        return self.threads if self.threads > 0 else (os.cpu_count() or 1)


def _parse_config_text(text: str, origin: str) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{origin}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


_CAP_KEYS = ("unary_bits", "function_n", "graph_n")


def _apply_caps(caps: Caps, items: dict, origin: str) -> Caps:
    for key, value in items.items():
        if key not in _CAP_KEYS:
            raise ValueError(
                f"{origin}: unknown cap {key!r}; expected one of {_CAP_KEYS}"
            )
        caps = replace(caps, **{key: int(value)})
    return caps


def _parse_caps_override(text: str) -> dict:
    items = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, _, value = part.partition("=")
        if not value:
            raise ValueError(f"caps override needs key=value pairs, got {part!r}")
        items[key.strip()] = value.strip()
    return items


def resolve_settings(args: argparse.Namespace, environ: dict) -> Settings:
    settings = Settings()

    config_path = getattr(args, "config", None)
    if config_path is None and os.path.exists("typdeg.cfg"):
        config_path = "typdeg.cfg"
    if config_path is not None:
        try:
            with open(config_path, "r", encoding="utf-8") as handle:
                file_values = _parse_config_text(handle.read(), config_path)
        except OSError as exc:
            raise ValueError(f"cannot read config {config_path}: {exc}") from exc
        caps = settings.caps
        cap_items = {
            key[len("caps."):]: value
            for key, value in file_values.items()
            if key.startswith("caps.")
        }
        caps = _apply_caps(caps, cap_items, config_path)
        settings = Settings(
            seed=int(file_values.get("seed", settings.seed)),
            outdir=file_values.get("outdir", settings.outdir),
            threads=int(file_values.get("threads", settings.threads)),
            caps=caps,
        )
        unknown = [
            key for key in file_values
            if key not in ("seed", "outdir", "threads")
            and not key.startswith("caps.")
        ]
        if unknown:
            raise ValueError(f"{config_path}: unknown keys {unknown}")

    if getattr(args, "seed", None) is not None:
        settings = replace(settings, seed=args.seed)
    if getattr(args, "outdir", None) is not None:
        settings = replace(settings, outdir=args.outdir)
    if getattr(args, "threads", None) is not None:
        settings = replace(settings, threads=args.threads)
    if getattr(args, "caps_override", None) is not None:
        settings = replace(
            settings,
            caps=_apply_caps(
                settings.caps, _parse_caps_override(args.caps_override),
                "--caps-override",
            ),
        )

    if "TYPDEG_SEED" in environ:
        settings = replace(settings, seed=int(environ["TYPDEG_SEED"]))
    if "TYPDEG_OUTDIR" in environ:
        settings = replace(settings, outdir=environ["TYPDEG_OUTDIR"])
    if "TYPDEG_THREADS" in environ:
        settings = replace(settings, threads=int(environ["TYPDEG_THREADS"]))
    env_caps = {
        key: environ[f"TYPDEG_CAP_{key.upper()}"]
        for key in _CAP_KEYS
        if f"TYPDEG_CAP_{key.upper()}" in environ
    }
    if env_caps:
        settings = replace(
            settings, caps=_apply_caps(settings.caps, env_caps, "environment")
        )
    return settings


# ---------------------------------------------------------------------------
# Argument parsing helpers

def parse_signature(text: str) -> Signature:
    if text == FUNCTION:
        return Signature.function()
    if text == GRAPH:
        return Signature.graph()
    if text == UNARY or text.startswith(f"{UNARY}:"):
        _, _, tail = text.partition(":")
        if not tail:
            raise ValueError("unary signature needs a predicate count: unary:k")
        return Signature.unary(int(tail))
    raise ValueError(f"unknown signature {text!r}; use unary:k, function, or graph")


def parse_ns(text: str) -> list:
    """Grid syntax: '2,4,8', 'start:end:step', or 'start:end:loggrid'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:end:step, got {text!r}")
        start, end = int(parts[0]), int(parts[1])
        if start < 1 or end < start:
            raise ValueError(f"bad grid range {start}..{end}")
        if parts[2] == "loggrid":
            ns = []
            n = start
            while n < end:
                ns.append(n)
                n = max(n + 1, 2 * n)
            ns.append(end)
            return ns
        step = int(parts[2])
        if step < 1:
            raise ValueError("grid step must be positive")
        return list(range(start, end + 1, step))
    ns = [int(part) for part in text.split(",") if part.strip()]
    if not ns:
        raise ValueError("empty n grid")
    return ns


def resolve_property(text: str, sig: Signature) -> logic.Formula:
    f = catalog.resolve(text, sig)
    if f is not None:
        return f
    return logic.parse_property(text, sig)


# ---------------------------------------------------------------------------
# Output

def make_manifest(argv: list, sig: Optional[Signature], conv: str, settings: Settings) -> dict:
    caps = settings.caps
    return {
        "record": "manifest",
        "version": VERSION,
        "command_line": list(argv),
        "signature": None if sig is None else sig.describe(),
        "convention": conv,
        "seed": settings.seed,
        "generator": GENERATOR_ID,
        "caps": {
            "unary_bits": caps.unary_bits,
            "function_n": caps.function_n,
            "graph_n": caps.graph_n,
        },
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def _dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def _out_path(settings: Settings, out: str) -> str:
    if os.path.isabs(out):
        return out
    return os.path.join(settings.outdir, out)


def emit_results(
    records: list,
    fmt: str,
    path: str,
    manifest: dict,
    csv_text: Optional[str] = None,
) -> None:
    """Write machine output; csv_text overrides the generic CSV layout."""
    try:
        if fmt == "json":
            payload = {"manifest": manifest, "results": records}
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        elif fmt == "csv":
            if csv_text is None:
                if not records:
                    raise ValueError("no records to write")
                keys = list(records[0].keys())
                lines = [",".join(keys)]
                for record in records:
                    lines.append(
                        ",".join("" if record[k] is None else str(record[k]) for k in keys)
                    )
                csv_text = "\n".join(lines) + "\n"
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(csv_text)
        elif fmt == "jsonl-append":
            with open(path, "a", encoding="utf-8") as handle:
                handle.write(_dumps(manifest) + "\n")
                for record in records:
                    handle.write(_dumps(record) + "\n")
        else:
            raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise ValueError(f"cannot write {path}: {exc}") from exc


def _print_report(rep: DegreeReport) -> None:
    print(f"  kind        {rep.kind}")
    print(f"  n           {rep.n}")
    print(f"  value       {rep.value.numerator}/{rep.value.denominator}")
    print(f"  float       {rep.float_value!r}")
    print(f"  favorable   {rep.favorable}")
    print(f"  total       {rep.total}")
    print(f"  method      {rep.method}")
    print(f"  convention  {rep.convention}")
    print(f"  property    {rep.formula_text}")


def _print_estimate(est: Estimate) -> None:
    print(f"  kind        {est.kind}")
    print(f"  n           {est.n}")
    print(f"  point       {est.point!r}")
    print(f"  wilson 95%  [{est.ci_low!r}, {est.ci_high!r}]")
    print(f"  favorable   {est.favorable}/{est.samples}")
    print(f"  seed        {est.seed}  streams {est.streams}  {est.generator}")
    print(f"  convention  {est.convention}")
    print(f"  property    {est.formula_text}")


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_degree(args, settings: Settings, argv: list) -> int:
    sig = parse_signature(args.sig)
    f = resolve_property(args.prop, sig)
    threads = settings.effective_threads()
    if args.kind == "typ":
        rep = degrees.typicality_degree(
            sig, args.n, f, args.conv, settings.caps, threads=threads
        )
    else:
        rep = degrees.neutrality_degree(
            sig, args.n, f, args.conv, settings.caps, threads=threads
        )
    print(f"{sig.describe()} n={args.n} {args.conv}")
    _print_report(rep)
    if args.out:
        manifest = make_manifest(argv, sig, args.conv, settings)
        path = _out_path(settings, args.out)
        emit_results([report_to_json_dict(rep)], args.format, path, manifest)
        print(f"results written to {path}")
    return EXIT_OK


def _cmd_mu(args, settings: Settings, argv: list) -> int:
    sig = parse_signature(args.sig)
    f = resolve_property(args.prop, sig)
    threads = settings.effective_threads()
    rep = degrees.truth_probability(
        sig, args.n, f, mcount=args.m, conv=args.conv, caps=settings.caps,
        threads=threads,
    )
    print(f"{sig.describe()} n={args.n} {args.conv}")
    _print_report(rep)
    if args.out:
        manifest = make_manifest(argv, sig, args.conv, settings)
        path = _out_path(settings, args.out)
        emit_results([report_to_json_dict(rep)], args.format, path, manifest)
        print(f"results written to {path}")
    return EXIT_OK


def _cmd_sample(args, settings: Settings, argv: list) -> int:
    sig = parse_signature(args.sig)
    f = resolve_property(args.prop, sig)
    seed = settings.seed
    threads = settings.effective_threads()
    if args.kind in ("typ", "ntr"):
        est = montecarlo.estimate_degree(
            sig, args.n, f, args.kind, samples=args.samples, seed=seed,
            conv=args.conv, streams=args.streams, threads=threads,
        )
    else:
        est = montecarlo.estimate_truth_probability(
            sig, args.n, f, mcount=args.m, samples=args.samples, seed=seed,
            conv=args.conv, streams=args.streams, threads=threads,
        )
    print(f"{sig.describe()} n={args.n} {args.conv}")
    _print_estimate(est)
    if args.out:
        manifest = make_manifest(argv, sig, args.conv, settings)
        manifest["seed"] = seed
        path = _out_path(settings, args.out)
        emit_results([estimate_to_json_dict(est)], args.format, path, manifest)
        print(f"results written to {path}")
    return EXIT_OK


def _cmd_sequence(args, settings: Settings, argv: list) -> int:
    sig = parse_signature(args.sig)
    f = resolve_property(args.prop, sig)
    ns = parse_ns(args.ns)
    seed = settings.seed
    budget = analysis.SampleBudget(
        samples=args.samples, seed=seed, streams=args.streams,
        threads=settings.effective_threads(),
    )
    points, problems = analysis.build_sequence(
        sig, f, args.kind, ns, conv=args.conv, method_policy=args.method,
        budget=budget, caps=settings.caps, mcount=args.m,
        threads=settings.effective_threads(),
    )

    if args.target == "auto":
        target = analysis.limit_target(sig, f, args.kind, args.conv, args.m)
    elif args.target == "none":
        target = None
    else:
        target = float(args.target)

    print(f"{sig.describe()} {args.conv} kind={args.kind} property={logic.render(f)}")
    if target is not None:
        print(f"target {target!r}")
    print(f"{'n':>8}  {'method':<11}  {'value':<22}  gap")
    for p in points:
        gap = "" if target is None else repr(abs(p.value - target))
        print(f"{p.n:>8}  {p.method:<11}  {p.value!r:<22}  {gap}")
    for problem in problems:
        print(f"n={problem.n}: {problem.message}", file=sys.stderr)

    if len(points) >= 3:
        report = analysis.convergence_report(points, target)
        print(f"trend {report.trend}", end="")
        if report.last_gap is not None:
            print(f"  last-gap {report.last_gap!r}", end="")
        if report.aitken_extrapolation is not None:
            print(f"  extrapolated {report.aitken_extrapolation!r}", end="")
        print()

    if not points:
        print("no points computed", file=sys.stderr)
        return EXIT_VERIFY_FAILED

    manifest = make_manifest(argv, sig, args.conv, settings)
    manifest["seed"] = seed
    records = [analysis.point_to_json_dict(p, args.kind, target) for p in points]
    out_path = None
    if args.out:
        out_path = _out_path(settings, args.out)
        emit_results(
            records, args.format, out_path, manifest,
            csv_text=analysis.sequence_to_csv(points, args.kind, target),
        )
        print(f"results written to {out_path}")

    if args.plot is not None:
        from . import plotting  # deferred: pulls in matplotlib

        if args.plot:
            plot_path = _out_path(settings, args.plot)
        elif out_path:
            plot_path = os.path.splitext(out_path)[0] + ".png"
        else:
            plot_path = _out_path(settings, "sequence.png")
        title = f"{sig.describe()} {args.kind} {logic.render(f)}"
        plotting.render_sequence_plot(points, args.kind, target, plot_path, title)
        print(f"plot written to {plot_path}")
    return EXIT_OK


def _cmd_verify(args, settings: Settings, argv: list) -> int:
    results = verification.run_suites(args.suite)
    failed = 0
    for check in results:
        if check.passed:
            print(f"ok   {check.suite:<14} {check.name}")
        else:
            failed += 1
            print(f"FAIL {check.suite:<14} {check.name}: {check.details}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    if args.out:
        manifest = make_manifest(argv, None, FREE, settings)
        records = [
            {
                "suite": check.suite,
                "name": check.name,
                "passed": check.passed,
                "details": check.details,
            }
            for check in results
        ]
        path = _out_path(settings, args.out)
        emit_results(records, args.format, path, manifest)
        print(f"results written to {path}")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def _cmd_formulas(args, settings: Settings, argv: list) -> int:
    sig = parse_signature(args.sig)
    rows = catalog.entries(sig)
    bad = 0
    for name, f in rows:
        text = logic.render(f)
        back = logic.parse_property(text, sig)
        if back != f:
            bad += 1
            print(f"FAIL {name:<14} {text}  (round trip broke)")
        else:
            print(f"{name:<14} {text}")
    if sig.family == UNARY and sig.k >= 2:
        print("# basic(i1,..,ip;e1,..,ep) builds any signed conjunction")
    if sig.family == GRAPH:
        print("# adjk(k) builds the exact-adjacency-count property for any k")
    return EXIT_OK if bad == 0 else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# Parser

def _add_common(sub: argparse.ArgumentParser, sampling: bool) -> None:
    sub.add_argument("--sig", required=True, help="unary:k, function, or graph")
    sub.add_argument("--conv", choices=sorted(CONVENTIONS), default=FREE)
    sub.add_argument("--prop", required=True, help="formula text or catalog name")
    sub.add_argument("--out", help="machine-readable output file")
    sub.add_argument(
        "--format", choices=("json", "csv", "jsonl-append"), default="json"
    )
    if sampling:
        sub.add_argument("--samples", type=int, default=10**4)
        sub.add_argument("--seed", type=int, default=None)
        sub.add_argument("--streams", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="typdeg",
        description="Typicality degrees and truth probabilities over finite structures",
    )
    parser.add_argument("--version", action="version", version=f"typdeg {VERSION}")
    parser.add_argument("--config", help="key=value settings file")
    parser.add_argument("--outdir", help="directory for output files")
    parser.add_argument("--threads", type=int, help="worker threads (0 = all cores)")
    parser.add_argument(
        "--caps-override",
        help="enumeration caps, e.g. unary_bits=26,function_n=9",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("degree", help="exact d_n(property : kind)")
    _add_common(sub, sampling=False)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--kind", choices=("typ", "ntr"), required=True)
    sub.set_defaults(handler=_cmd_degree)

    sub = subs.add_parser("mu", help="exact truth probability")
    _add_common(sub, sampling=False)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--m", type=int, help="witness count for a property")
    sub.set_defaults(handler=_cmd_mu)

    sub = subs.add_parser("sample", help="Monte Carlo estimate")
    _add_common(sub, sampling=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--kind", choices=("typ", "ntr", "mu"), required=True)
    sub.add_argument("--m", type=int, help="witness count for mu over a property")
    sub.set_defaults(handler=_cmd_sample)

    sub = subs.add_parser("sequence", help="values along an n grid")
    _add_common(sub, sampling=True)
    sub.add_argument("--ns", required=True, help="2,4,8 or start:end:step or start:end:loggrid")
    sub.add_argument("--kind", choices=("typ", "ntr", "mu"), required=True)
    sub.add_argument("--m", type=int, help="witness count for mu over a property")
    sub.add_argument(
        "--method",
        choices=("auto", "enumeration", "closed-form", "monte-carlo"),
        default="auto",
    )
    sub.add_argument(
        "--target", default="auto",
        help="limit to measure against: auto, none, or a number",
    )
    sub.add_argument(
        "--plot", nargs="?", const="", metavar="PATH",
        help="render the sequence figure (default path: alongside --out)",
    )
    sub.set_defaults(handler=_cmd_sequence)

    sub = subs.add_parser("verify", help="run self-check suites")
    sub.add_argument(
        "--suite", choices=sorted(verification.SUITES), default="all"
    )
    sub.add_argument("--out", help="machine-readable output file")
    sub.add_argument(
        "--format", choices=("json", "csv", "jsonl-append"), default="json"
    )
    sub.set_defaults(handler=_cmd_verify)

    sub = subs.add_parser("formulas", help="list the built-in catalog")
    sub.add_argument("--sig", required=True, help="unary:k, function, or graph")
    sub.set_defaults(handler=_cmd_formulas)

    return parser


def run(argv: list, environ: Optional[dict] = None) -> int:
    """Execute one CLI invocation; returns the exit status."""
    if environ is None:
        environ = dict(os.environ)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        settings = resolve_settings(args, environ)
        return args.handler(args, settings, argv)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
