"""Confidence calibration: ECE, ECE-sweep and reliability-diagram data."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import binning
from .binning import BinStats, EqualMass, EqualWidth, Sweep
from .core import Dataset, top_predictions
from .errors import ArgumentError


@dataclass(frozen=True)
class CalibrationReport:
    metric_name: str
    value: float
    scheme: dict
    norm: int
    per_bin: list
    n: int
    num_bins_effective: int

    @property
    def num_bins_occupied(self) -> int:
        return sum(1 for b in self.per_bin if b.count)

    def to_dict(self) -> dict:
        return {
            "report_type": "calibration",
            "metric_name": self.metric_name,
            "value": self.value,
            "scheme": dict(self.scheme),
            "norm": self.norm,
            "n": self.n,
            "num_bins_effective": self.num_bins_effective,
            "per_bin": [b.to_dict() for b in self.per_bin],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CalibrationReport":
        return cls(
            metric_name=d["metric_name"],
            value=d["value"],
            scheme=dict(d["scheme"]),
            norm=int(d["norm"]),
            per_bin=[BinStats.from_dict(b) for b in d["per_bin"]],
            n=int(d["n"]),
            num_bins_effective=int(d["num_bins_effective"]),
        )


def check_norm(norm) -> int:
    if norm in (1, "1", "l1", "L1"):
        return 1
    if norm in (2, "2", "l2", "L2"):
        return 2
    raise ArgumentError(f"norm must be 1 or 2, got {norm!r}")


def weighted_gap(per_bin, norm: int) -> float:
    """sum_m w_m |acc_m - conf_m| (norm 1) or sqrt(sum_m w_m (acc_m - conf_m)^2) (norm 2).

    Empty bins carry weight 0 and are skipped.
    """
    occupied = [b for b in per_bin if b.count]
    if norm == 1:
        return math.fsum(b.weight * abs(b.acc - b.conf) for b in occupied)
    return math.sqrt(math.fsum(b.weight * (b.acc - b.conf) ** 2 for b in occupied))


def binned_error(confidences, correct, scheme, norm: int = 1):
    """Bin ``confidences`` under ``scheme`` and return ``(value, per_bin)``."""
    assignment, edges = binning.assign(scheme, confidences)
    per_bin = binning.bin_stats(assignment, correct, confidences, edges)
    return weighted_gap(per_bin, norm), per_bin


def ece(dataset: Dataset, scheme=None, norm=1) -> CalibrationReport:
    """Expected calibration error over top-label confidences.

    ``scheme`` is an :class:`EqualWidth`, :class:`EqualMass` or :class:`Sweep`
    (the last delegates to :func:`ece_sweep`); default is 10 equal-width bins.
    """
    scheme = EqualWidth(10) if scheme is None else scheme
    norm = check_norm(norm)
    if isinstance(scheme, Sweep):
        return ece_sweep(dataset, norm, ties=scheme.ties)
    conf, correct = top_predictions(dataset)
    if conf.size == 0:
        raise ArgumentError("cannot compute ECE of an empty dataset")
    value, per_bin = binned_error(conf, correct, scheme, norm)
    return CalibrationReport(
        metric_name="ece",
        value=value,
        scheme=scheme.describe(),
        norm=norm,
        per_bin=per_bin,
        n=int(conf.size),
        num_bins_effective=scheme.num_bins,
    )


def _sorted_run_starts(sorted_conf: np.ndarray, ties: str) -> np.ndarray:
    """next_start[i]: first bin-eligible split position >= i (n at the end)."""
    n = sorted_conf.size
    if ties == "split":
        return np.arange(n + 1)
    run_start = np.concatenate(([True], sorted_conf[1:] != sorted_conf[:-1], [True]))
    positions = np.flatnonzero(run_start)  # includes n
    return positions[np.searchsorted(positions, np.arange(n + 1), side="left")]


def _monotone_at(b, n, next_start, cum_correct) -> bool:
    base, extra = divmod(n, b)
    m = np.arange(b + 1)
    split = m * base + np.minimum(m, extra)
    bounds = next_start[split]
    counts = np.diff(bounds)
    hits = np.diff(cum_correct[bounds])
    keep = counts > 0
    counts, hits = counts[keep], hits[keep]
    # hits[m]/counts[m] <= hits[m+1]/counts[m+1], compared exactly in integers
    return bool(np.all(hits[:-1] * counts[1:] <= hits[1:] * counts[:-1]))


def sweep_num_bins(confidences, correct, ties: str = "group") -> int:
    """Largest b in [1, n] whose equal-mass bin accuracies are non-decreasing."""
    conf = np.asarray(confidences, dtype=float)
    n = conf.size
    if n == 0:
        raise ArgumentError("sweep needs at least one sample")
    order = np.argsort(conf, kind="stable")
    cum_correct = np.concatenate(([0], np.cumsum(np.asarray(correct, dtype=np.int64)[order])))
    next_start = _sorted_run_starts(conf[order], ties)
    for b in range(n, 0, -1):
        if _monotone_at(b, n, next_start, cum_correct):
            return b
    return 1  # unreachable: a single bin is always monotone


def ece_sweep(dataset: Dataset, norm=1, ties: str = "group") -> CalibrationReport:
    """ECE at the largest equal-mass bin count with monotone bin accuracies."""
    norm = check_norm(norm)
    conf, correct = top_predictions(dataset)
    b = sweep_num_bins(conf, correct, ties)
    value, per_bin = binned_error(conf, correct, EqualMass(b, ties), norm)
    return CalibrationReport(
        metric_name="ece_sweep",
        value=value,
        scheme=Sweep(ties).describe(),
        norm=norm,
        per_bin=per_bin,
        n=int(conf.size),
        num_bins_effective=b,
    )


def reliability_data(dataset: Dataset, scheme=None) -> CalibrationReport:
    """Per-bin boundaries, acc, conf, count and gap for drawing a reliability diagram.

    The ``value`` field carries the norm-1 ECE under the same scheme.
    """
    report = ece(dataset, scheme, norm=1)
    return CalibrationReport(
        metric_name="reliability",
        value=report.value,
        scheme=report.scheme,
        norm=1,
        per_bin=report.per_bin,
        n=report.n,
        num_bins_effective=report.num_bins_effective,
    )
