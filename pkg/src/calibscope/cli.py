"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 input error, 4 metric precondition
failure.  Summaries go to standard output, reports to files.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .beyond import classwise_ece, multiclass_report
from .binning import EqualMass, EqualWidth, Sweep
from .confidence import ece, reliability_data
from .core import entropy
from .errors import ArgumentError, CalibError
from .human import human_report
from .io import IngestOptions, dataset_to_jsonl, dumps, emit_report, ingest, write_atomic
from .svg import reliability_svg
from .synth import CalibratedWorld, Distorted, MajorityPathology, generate

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_PRECONDITION = 0, 2, 3, 4

METRICS = ("ece", "classwise-ece", "multiclass", "entce", "rankcs", "distce")
HARD_METRICS = {"ece", "classwise-ece", "multiclass"}
SOFT_METRICS = {"entce", "rankcs", "distce"}
DEFAULT_BINS = 10


class UsageError(Exception):
    pass


class PreconditionError(Exception):
    pass


class InputError(Exception):
    pass


def _style(text: str) -> str:
    if os.environ.get("CALIB_NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\033[1m{text}\033[0m"


def _warn(msg: str) -> None:
    print(f"calibscope: warning: {msg}", file=sys.stderr)


def parse_metrics(text: str) -> list:
    names = [m.strip() for m in text.split(",") if m.strip()]
    if not names:
        raise UsageError("--metrics is empty")
    if "all" in names:
        return list(METRICS)
    unknown = [m for m in names if m not in METRICS]
    if unknown:
        raise UsageError(f"unknown metric(s) {unknown}; choose from {list(METRICS) + ['all']}")
    return list(dict.fromkeys(names))


def build_scheme(args):
    if args.bins is not None and args.bins < 1:
        raise UsageError(f"--bins must be at least 1, got {args.bins}")
    if args.scheme == "sweep":
        if args.bins is not None:
            _warn("--bins is ignored with --scheme sweep")
        return Sweep()
    M = DEFAULT_BINS if args.bins is None else args.bins
    return EqualWidth(M) if args.scheme == "equal-width" else EqualMass(M)


def _load(args):
    options = IngestOptions(
        format=args.format,
        derive_hard_from_votes=args.derive_hard_from_votes,
        simplex_tol=args.simplex_tol,
    )
    try:
        return ingest(args.input, options)
    except (CalibError, OSError) as exc:
        raise InputError(str(exc)) from exc


def _check_preconditions(dataset, metrics):
    for m in metrics:
        if m in HARD_METRICS and not dataset.has_hard_labels:
            missing = [r.id for r in dataset if r.hard_label is None]
            raise PreconditionError(
                f"metric '{m}' requires a hard label on every record; "
                f"{len(missing)} record(s) lack one (e.g. {missing[:5]})"
            )
        if m in SOFT_METRICS and not dataset.has_soft_labels:
            missing = [r.id for r in dataset if r.soft_label is None]
            raise PreconditionError(
                f"metric '{m}' requires a soft label or votes on every record; "
                f"{len(missing)} record(s) lack one (e.g. {missing[:5]})"
            )


def _default_output(input_path, suffix):
    p = Path(input_path)
    return p.with_name(p.stem + suffix)


def _describe(scheme: dict, norm: int) -> str:
    if scheme["kind"] == "sweep":
        return f"sweep, l{norm}"
    return f"{scheme['kind']}, {scheme['num_bins']} bins, l{norm}"


def cmd_evaluate(args) -> int:
    metrics = parse_metrics(args.metrics)
    scheme = build_scheme(args)
    if isinstance(scheme, Sweep) and "classwise-ece" in metrics:
        raise UsageError("--scheme sweep applies to ece only; class-wise ECE needs equal-width or equal-mass")
    norm = 1 if args.norm == "l1" else 2
    if args.rounding_decimals < 1:
        raise UsageError("--rounding-decimals must be at least 1")

    dataset = _load(args)
    _check_preconditions(dataset, metrics)

    reports = {}
    lines = []
    if "ece" in metrics:
        r = ece(dataset, scheme, norm)
        reports["ece"] = r
        extra = f" (b={r.num_bins_effective})" if isinstance(scheme, Sweep) else ""
        lines.append((r.metric_name, f"{r.value:.6g}", _describe(r.scheme, norm) + extra))
    if "classwise-ece" in metrics:
        r = classwise_ece(dataset, scheme, norm)
        reports["classwise-ece"] = r
        lines.append(("classwise_ece", f"{r.mean_value:.6g}", _describe(r.scheme, norm)))
    if "multiclass" in metrics:
        r = multiclass_report(dataset, args.rounding_decimals)
        reports["multiclass"] = r
        worst = max(g.l1_gap for g in r.groups)
        lines.append(("multiclass", f"{len(r.groups)} groups, max l1 gap {worst:.6g}",
                      f"{args.rounding_decimals} decimal(s)"))
    if SOFT_METRICS & set(metrics):
        h = human_report(dataset)
        reports["human"] = h
        if "entce" in metrics:
            lines.append(("mean_abs_entce", f"{h.mean_abs_entce:.6g}", "nats"))
        if "rankcs" in metrics:
            lines.append(("rankcs", f"{h.rankcs:.6g}", f"n={h.n}"))
        if "distce" in metrics:
            lines.append(("mean_abs_distce", f"{h.mean_abs_distce:.6g}", "tvd"))

    payload = {
        "input": Path(args.input).name,
        "n": len(dataset),
        "num_classes": dataset.num_classes,
        "metrics": {k: v.to_dict() for k, v in reports.items()},
    }
    output = args.output or _default_output(args.input, ".report.json")
    write_atomic(output, dumps(payload) + "\n")
    for name, value, note in lines:
        print(f"{_style(name)}: {value}  [{note}]")
    return EXIT_OK


def cmd_diagram(args) -> int:
    scheme = build_scheme(args)
    dataset = _load(args)
    _check_preconditions(dataset, ["ece"])
    report = reliability_data(dataset, scheme)
    json_out = args.output or _default_output(args.input, ".reliability.json")
    svg_out = args.svg or Path(json_out).with_suffix(".svg")
    emit_report(report, "json", json_out)
    write_atomic(svg_out, reliability_svg(report))
    print(f"{_style('ece')}: {report.value:.6g}  [{_describe(report.scheme, 1)}]")
    return EXIT_OK


def _parse_counts(text: str) -> tuple:
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError:
        raise UsageError(f"--counts must be comma-separated integers, got {text!r}") from None


def cmd_synth(args) -> int:
    try:
        if args.kind == "majority":
            spec = MajorityPathology(_parse_counts(args.counts), args.confidence, args.strict)
        else:
            spec = CalibratedWorld(args.n, args.k, args.seed, args.concentration)
            if args.temperature is not None:
                spec = Distorted(spec, args.temperature)
    except ArgumentError as exc:
        raise UsageError(str(exc)) from None
    dataset = generate(spec)
    write_atomic(args.output, dataset_to_jsonl(dataset))
    provenance = {
        "generator": "calibscope.synth",
        "version": __version__,
        "rng": "numpy.random.Generator(PCG64)",
        "spec": spec.to_dict(),
        "n": len(dataset),
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }
    write_atomic(str(args.output) + ".provenance.json", dumps(provenance) + "\n")
    print(f"{_style('synth')}: wrote {len(dataset)} records to {args.output}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    dataset = _load(args)
    probs = dataset.probs
    conf = probs.max(axis=1)
    hard = sum(r.hard_label is not None for r in dataset)
    derived = sum(r.hard_label_derived for r in dataset)
    soft = [r.soft_label for r in dataset if r.soft_label is not None]
    edges = np.linspace(0.0, 1.0, 11)
    cells = np.clip(np.searchsorted(edges, conf, side="left") - 1, 0, 9)
    hist = np.bincount(cells, minlength=10)
    print(f"{_style('n')}: {len(dataset)}")
    print(f"{_style('K')}: {dataset.num_classes}")
    print(f"{_style('hard labels')}: {hard} ({derived} derived by majority vote)")
    print(f"{_style('soft labels')}: {len(soft)}")
    print(f"{_style('confidence histogram')}:")
    for m in range(10):
        lo = "[0.0" if m == 0 else f"({edges[m]:.1f}"
        print(f"  {lo}, {edges[m + 1]:.1f}]  {hist[m]}")
    if soft:
        mean_h = float(np.mean([entropy(s) for s in soft]))
        print(f"{_style('mean soft-label entropy')}: {mean_h:.6g} nats")
    else:
        print(f"{_style('mean soft-label entropy')}: n/a")
    return EXIT_OK


def _add_input_args(p):
    p.add_argument("-i", "--input", required=True, help="JSONL or CSV prediction file")
    p.add_argument("--format", choices=("jsonl", "csv"), help="input format (default: from suffix)")
    p.add_argument("--derive-hard-from-votes", action="store_true",
                   help="use the majority vote as hard label where none is given")
    p.add_argument("--simplex-tol", type=float, default=1e-6)


def _add_binning_args(p):
    p.add_argument("--bins", type=int, default=None, help=f"number of bins (default {DEFAULT_BINS})")
    p.add_argument("--scheme", choices=("equal-width", "equal-mass", "sweep"), default="equal-width")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="calibscope", description="Calibration metrics for classifiers.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="compute calibration metrics")
    _add_input_args(p)
    _add_binning_args(p)
    p.add_argument("-o", "--output", help="report path (default: <input>.report.json)")
    p.add_argument("--norm", choices=("l1", "l2"), default="l1")
    p.add_argument("--metrics", default="ece", help="comma list of " + ",".join(METRICS) + " or all")
    p.add_argument("--rounding-decimals", type=int, default=1)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("diagram", help="reliability diagram data and SVG")
    _add_input_args(p)
    _add_binning_args(p)
    p.add_argument("-o", "--output", help="JSON path (default: <input>.reliability.json)")
    p.add_argument("--svg", help="SVG path (default: JSON path with .svg suffix)")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("kind", choices=("majority", "world"))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--counts", default="7,2,1", help="majority: class counts")
    p.add_argument("--confidence", type=float, default=0.7, help="majority: top probability")
    p.add_argument("--strict", action="store_true", help="majority: require confidence == prevalence")
    p.add_argument("--n", type=int, default=1000, help="world: number of records")
    p.add_argument("--k", type=int, default=3, help="world: number of classes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--concentration", type=float, default=1.0, help="world: Dirichlet concentration")
    p.add_argument("--temperature", type=float, default=None, help="world: distort with this temperature")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("inspect", help="summarize a prediction file")
    _add_input_args(p)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"calibscope: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"calibscope: error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, OSError) as exc:
        print(f"calibscope: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CalibError as exc:
        # raised by a metric on data that ingested fine, e.g. more equal-mass bins than samples
        print(f"calibscope: error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
