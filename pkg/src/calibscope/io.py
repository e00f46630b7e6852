"""Reading prediction files and writing reports.

JSONL, one record per line::

    {"id": "s1", "probs": [0.1, 0.2, 0.7], "label": 2}
    {"id": "s2", "probs": [0.6, 0.3, 0.1], "votes": [0, 0, 1]}
    {"id": "s3", "probs": [0.2, 0.3, 0.5], "soft_label": [0.1, 0.2, 0.7]}

CSV, K inferred from the header::

    id,prob_0,...,prob_{K-1},label[,vote_0,...,vote_{A-1}][,soft_0,...,soft_{K-1}]

Empty cells mean "absent".  A record carries votes or a soft label, never
both.  Class indices are 0-based.

Reports are written with a fixed key order and floats at 17 significant
digits, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .beyond import ClasswiseReport, MulticlassGroupReport
from .confidence import CalibrationReport
from .core import DEFAULT_TOL, Dataset, PredictionRecord, validate_simplex
from .errors import ArgumentError, CalibError, IoError, ParseError, SchemaError
from .human import HumanCalibReport, majority_vote, votes_to_distribution


@dataclass(frozen=True)
class IngestOptions:
    format: str | None = None  # "jsonl" or "csv"; None infers from the suffix
    derive_hard_from_votes: bool = False
    simplex_tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.format not in (None, "jsonl", "csv"):
            raise ArgumentError(f"unknown input format {self.format!r}")
        if not 0 < self.simplex_tol <= 0.01:
            raise ArgumentError(f"simplex_tol must lie in (0, 0.01], got {self.simplex_tol}")


def _infer_format(path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    raise ArgumentError(f"cannot infer the format of {path}; pass format='jsonl' or 'csv'")


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _build_record(rid, probs, label, votes, soft, line, options, K):
    if probs is None:
        raise ParseError(f"record {rid!r} has no probs", line)
    if K is not None and len(probs) != K:
        raise SchemaError(f"line {line}: record {rid!r} has {len(probs)} probabilities, expected {K}")
    if votes is not None and soft is not None:
        raise SchemaError(f"line {line}: record {rid!r} has both votes and soft_label")
    try:
        p = validate_simplex(probs, options.simplex_tol)
        soft_label = None
        if soft is not None:
            if len(soft) != len(p):
                raise SchemaError(f"soft_label has {len(soft)} entries, probs has {len(p)}")
            soft_label = validate_simplex(soft, options.simplex_tol)
        derived = False
        if votes is not None:
            soft_label = votes_to_distribution(votes, len(p))
            if label is None and options.derive_hard_from_votes:
                label = majority_vote(votes, len(p))
                derived = True
        if label is not None and not 0 <= label < len(p):
            raise SchemaError(f"label {label} outside [0, {len(p) - 1}]")
        return PredictionRecord(rid, p, label, soft_label, derived)
    except CalibError as exc:
        raise type(exc)(f"line {line}: record {rid!r}: {exc}") from None


def _number_list(value, name, rid, line):
    if not isinstance(value, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        raise ParseError(f"record {rid!r}: {name} must be a list of numbers", line)
    return value


def _parse_jsonl(lines, options):
    records = []
    K = None
    for line_no, text in enumerate(lines, start=1):
        if not text.strip():
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line_no) from None
        if not isinstance(obj, dict):
            raise ParseError("expected a JSON object", line_no)
        rid = obj.get("id")
        if not isinstance(rid, str) or not rid:
            raise ParseError("missing or non-string id", line_no)
        probs = _number_list(obj.get("probs"), "probs", rid, line_no)
        label = obj.get("label")
        if label is not None and not _is_int(label):
            raise ParseError(f"record {rid!r}: label must be an integer", line_no)
        votes = obj.get("votes")
        if votes is not None and not (isinstance(votes, list) and votes and all(_is_int(v) for v in votes)):
            raise ParseError(f"record {rid!r}: votes must be a non-empty list of integers", line_no)
        soft = obj.get("soft_label")
        if soft is not None:
            soft = _number_list(soft, "soft_label", rid, line_no)
        rec = _build_record(rid, probs, label, votes, soft, line_no, options, K)
        K = len(rec.probs)
        records.append((line_no, rec))
    return records


def _parse_csv(lines, options):
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file", 1) from None
    header = [h.strip() for h in header]
    if not header or header[0] != "id":
        raise ParseError("header must start with 'id'", 1)

    def columns(prefix):
        cols = [(int(h[len(prefix):]), i) for i, h in enumerate(header)
                if h.startswith(prefix) and h[len(prefix):].isdigit()]
        cols.sort()
        if [k for k, _ in cols] != list(range(len(cols))):
            raise ParseError(f"{prefix}* columns must be numbered 0..N-1", 1)
        return [i for _, i in cols]

    prob_cols, vote_cols, soft_cols = columns("prob_"), columns("vote_"), columns("soft_")
    label_col = header.index("label") if "label" in header else None
    if len(prob_cols) < 2:
        raise ParseError("need at least two prob_k columns", 1)
    if soft_cols and len(soft_cols) != len(prob_cols):
        raise SchemaError(f"line 1: {len(soft_cols)} soft_k columns for {len(prob_cols)} classes")

    records = []
    for row in reader:
        line_no = reader.line_num
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", line_no)
        rid = row[0].strip()
        if not rid:
            raise ParseError("missing id", line_no)
        try:
            probs = [float(row[i]) for i in prob_cols]
            label = None
            if label_col is not None and row[label_col].strip():
                label = int(row[label_col])
            votes = [int(row[i]) for i in vote_cols if row[i].strip()] or None
            soft_cells = [row[i].strip() for i in soft_cols]
            soft = [float(c) for c in soft_cells] if any(soft_cells) else None
        except ValueError as exc:
            raise ParseError(f"record {rid!r}: {exc}", line_no) from None
        records.append((line_no, _build_record(rid, probs, label, votes, soft, line_no, options, None)))
    return records


def ingest(path, options: IngestOptions | None = None) -> Dataset:
    """Parse and validate a JSONL or CSV prediction file.

    Every error message names the offending line.  With
    ``derive_hard_from_votes`` a record that has votes but no label gets the
    majority vote (lowest index on ties) and ``hard_label_derived=True``.
    """
    options = options or IngestOptions()
    fmt = options.format or _infer_format(path)
    try:
        with open(path, newline="" if fmt == "csv" else None, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines(keepends=fmt == "csv")
    parsed = _parse_jsonl(lines, options) if fmt == "jsonl" else _parse_csv(lines, options)
    if not parsed:
        raise ParseError(f"{path} contains no records")
    seen = {}
    for line_no, rec in parsed:
        if rec.id in seen:
            raise SchemaError(f"line {line_no}: duplicate id {rec.id!r} (first on line {seen[rec.id]})")
        seen[rec.id] = line_no
    return Dataset([rec for _, rec in parsed])


# ---------------------------------------------------------------- writing

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ArgumentError(f"cannot serialize non-finite value {x!r}")
    return format(x, ".17g")


def dumps(obj, indent: int | None = 2, _level: int = 0) -> str:
    """JSON text with insertion-ordered keys and 17-significant-digit floats."""
    if obj is None or isinstance(obj, (bool, str)) or _is_int(obj):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalar
        return dumps(obj.item(), indent, _level)
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v, None) for v in obj) + "]"
        return "[" + sep.join(f"{pad}{dumps(v, indent, _level + 1)}" for v in obj) + end + "]"
    raise ArgumentError(f"cannot serialize {type(obj).__name__}")


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _report_dict(report) -> dict:
    return report if isinstance(report, dict) else report.to_dict()


_BIN_FIELDS = ("lower", "upper", "count", "acc", "conf", "gap", "weight")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, (list, tuple)):
        return " ".join(_csv_cell(x) for x in v)
    return str(v)


def report_to_csv(report) -> str:
    """Flat table for one report: one row per bin, class-bin, group or sample."""
    d = _report_dict(report)
    kind = d.get("report_type")
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if kind == "calibration":
        w.writerow(("metric", "value", "bin") + _BIN_FIELDS)
        for m, b in enumerate(d["per_bin"]):
            w.writerow([d["metric_name"], _csv_cell(d["value"]), m] + [_csv_cell(b[f]) for f in _BIN_FIELDS])
    elif kind == "classwise":
        w.writerow(("class_index", "class_value", "absent", "bin") + _BIN_FIELDS)
        for c in d["per_class"]:
            for m, b in enumerate(c["per_bin"]):
                w.writerow([c["class_index"], _csv_cell(c["value"]), _csv_cell(c["absent"]), m]
                           + [_csv_cell(b[f]) for f in _BIN_FIELDS])
    elif kind == "multiclass":
        w.writerow(("vector", "count", "frequencies", "l1_gap", "tvd_gap"))
        for g in d["groups"]:
            w.writerow([_csv_cell(g[f]) for f in ("vector", "count", "frequencies", "l1_gap", "tvd_gap")])
    elif kind == "human":
        w.writerow(("id", "entce", "distce", "rank_match", "ties"))
        for s in d["per_sample"]:
            w.writerow([_csv_cell(s[f]) for f in ("id", "entce", "distce", "rank_match", "ties")])
    else:
        raise ArgumentError(f"no CSV layout for report type {kind!r}")
    return buf.getvalue()


def emit_report(report, format: str = "json", path=None) -> str:
    """Serialize ``report`` (a report object or a plain dict of them) and,
    when ``path`` is given, write it atomically.  Returns the text."""
    if format == "json":
        d = _report_dict(report)
        if not isinstance(report, dict) or "report_type" in d:
            text = dumps(d) + "\n"
        else:
            text = dumps({k: _report_dict(v) for k, v in d.items()}) + "\n"
    elif format == "csv":
        text = report_to_csv(report)
    else:
        raise ArgumentError(f"unknown report format {format!r}")
    if path is not None:
        write_atomic(path, text)
    return text


_REPORT_TYPES = {
    "calibration": CalibrationReport,
    "classwise": ClasswiseReport,
    "multiclass": MulticlassGroupReport,
    "human": HumanCalibReport,
}


def report_from_dict(d: dict):
    try:
        cls = _REPORT_TYPES[d["report_type"]]
    except KeyError:
        raise SchemaError(f"unknown report type {d.get('report_type')!r}") from None
    return cls.from_dict(d)


def load_report(path):
    """Inverse of ``emit_report(..., "json")`` for single reports."""
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    return report_from_dict(d)


def record_to_dict(r: PredictionRecord) -> dict:
    d = {"id": r.id, "probs": list(r.probs.values)}
    if r.hard_label is not None:
        d["label"] = r.hard_label
    if r.soft_label is not None:
        d["soft_label"] = list(r.soft_label.values)
    return d


def dataset_to_jsonl(dataset: Dataset) -> str:
    return "".join(dumps(record_to_dict(r), indent=None) + "\n" for r in dataset)


def dataset_to_csv(dataset: Dataset) -> str:
    K = dataset.num_classes
    with_soft = any(r.soft_label is not None for r in dataset)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["id"] + [f"prob_{k}" for k in range(K)] + ["label"]
    if with_soft:
        header += [f"soft_{k}" for k in range(K)]
    w.writerow(header)
    for r in dataset:
        row = [r.id] + [_fmt_float(v) for v in r.probs] + [_csv_cell(r.hard_label)]
        if with_soft:
            row += [_fmt_float(v) for v in r.soft_label] if r.soft_label is not None else [""] * K
        w.writerow(row)
    return buf.getvalue()


def emit_dataset(dataset: Dataset, path, format: str | None = None) -> str:
    fmt = format or _infer_format(path)
    text = dataset_to_jsonl(dataset) if fmt == "jsonl" else dataset_to_csv(dataset)
    write_atomic(path, text)
    return text
