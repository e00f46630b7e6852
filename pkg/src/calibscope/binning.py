"""Partition confidences into bins and summarize each bin.

Equal-width bins are half-open on the left, ``(m/M, (m+1)/M]``, except bin 0
which also contains 0.  Equal-mass bins hold contiguous runs of the sorted
confidences; sizes differ by at most one and the larger bins come first.

Equal-mass binning has two tie modes.  ``"split"`` applies the size rule
literally, breaking ties between equal confidences by original position.
``"group"`` (the default for metric schemes) keeps every run of identical
confidences in one bin, namely the bin its first sorted member would get
under ``"split"``.  Grouping makes every metric a function of the multiset
of samples, so permuting records cannot change the result; on data without
ties the two modes coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ArgumentError, DimensionError

TIE_MODES = ("group", "split")


@dataclass(frozen=True)
class EqualWidth:
    num_bins: int = 10

    def __post_init__(self):
        _check_num_bins(self.num_bins)

    def describe(self) -> dict:
        return {"kind": "equal-width", "num_bins": self.num_bins}


@dataclass(frozen=True)
class EqualMass:
    num_bins: int = 10
    ties: str = "group"

    def __post_init__(self):
        _check_num_bins(self.num_bins)
        _check_ties(self.ties)

    def describe(self) -> dict:
        return {"kind": "equal-mass", "num_bins": self.num_bins, "ties": self.ties}


@dataclass(frozen=True)
class Sweep:
    """Largest equal-mass bin count whose bin accuracies stay monotone."""

    ties: str = "group"

    def __post_init__(self):
        _check_ties(self.ties)

    def describe(self) -> dict:
        return {"kind": "sweep", "ties": self.ties}


BinningScheme = Union[EqualWidth, EqualMass, Sweep]


def scheme_from_dict(d: dict) -> BinningScheme:
    kind = d["kind"]
    if kind == "equal-width":
        return EqualWidth(d["num_bins"])
    if kind == "equal-mass":
        return EqualMass(d["num_bins"], d.get("ties", "group"))
    if kind == "sweep":
        return Sweep(d.get("ties", "group"))
    raise ArgumentError(f"unknown binning scheme {kind!r}")


def _check_num_bins(M):
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 1:
        raise ArgumentError(f"number of bins must be a positive integer, got {M!r}")


def _check_ties(ties):
    if ties not in TIE_MODES:
        raise ArgumentError(f"ties must be one of {TIE_MODES}, got {ties!r}")


@dataclass(frozen=True)
class BinAssignment:
    bin_of: np.ndarray
    num_bins: int

    def members(self, m: int) -> np.ndarray:
        return np.flatnonzero(self.bin_of == m)

    def counts(self) -> np.ndarray:
        return np.bincount(self.bin_of, minlength=self.num_bins)


@dataclass(frozen=True)
class BinStats:
    """Count, accuracy, confidence and weight of one bin.

    ``acc`` and ``conf`` are ``None`` for an empty bin.  ``lower``/``upper`` are
    the bin edges for equal-width bins and the member confidence range for
    equal-mass bins (``None`` when empty).
    """

    count: int
    acc: Optional[float]
    conf: Optional[float]
    weight: float
    lower: Optional[float] = None
    upper: Optional[float] = None

    @property
    def gap(self) -> Optional[float]:
        if self.count == 0:
            return None
        return self.acc - self.conf

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "count": self.count,
            "acc": self.acc,
            "conf": self.conf,
            "gap": self.gap,
            "weight": self.weight,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BinStats":
        return cls(
            count=int(d["count"]),
            acc=d["acc"],
            conf=d["conf"],
            weight=d["weight"],
            lower=d.get("lower"),
            upper=d.get("upper"),
        )


def equal_width_edges(M: int) -> list:
    _check_num_bins(M)
    return [m / M for m in range(M + 1)]


def _as_confidences(confidences) -> np.ndarray:
    c = np.asarray(confidences, dtype=float).reshape(-1)
    if c.size and (np.any(~np.isfinite(c)) or c.min() < 0.0 or c.max() > 1.0):
        bad = c[~((c >= 0.0) & (c <= 1.0))][0]
        raise ArgumentError(f"confidence {bad!r} outside [0, 1]")
    return c


def assign_equal_width(confidences: Sequence[float], M: int) -> BinAssignment:
    """Bin m covers (m/M, (m+1)/M]; bin 0 also takes c = 0."""
    edges = np.asarray(equal_width_edges(M))
    c = _as_confidences(confidences)
    # comparing against the edges m/M, not ceil(c*M), keeps literal boundary values such as 0.3 in the lower bin
    bins = np.searchsorted(edges, c, side="left") - 1
    bins = np.clip(bins, 0, M - 1)
    return BinAssignment(bins.astype(int), M)


def equal_mass_sizes(n: int, M: int) -> list:
    """First ``n % M`` bins get ceil(n/M) members, the rest floor(n/M)."""
    base, extra = divmod(n, M)
    return [base + 1 if m < extra else base for m in range(M)]


def assign_equal_mass(confidences: Sequence[float], M: int, ties: str = "split") -> BinAssignment:
    """Split sorted confidences into M contiguous, near-equal groups.

    Sorting is stable, so equal confidences keep their original order.  See
    the module docstring for the ``ties`` modes.
    """
    _check_num_bins(M)
    _check_ties(ties)
    c = _as_confidences(confidences)
    n = c.size
    if M > n:
        raise ArgumentError(f"equal-mass binning needs at least M={M} samples, got {n}")
    order = np.argsort(c, kind="stable")
    sizes = equal_mass_sizes(n, M)
    rank_bins = np.repeat(np.arange(M), sizes)
    if ties == "group" and n:
        sorted_c = c[order]
        run_start = np.concatenate(([True], sorted_c[1:] != sorted_c[:-1]))
        first_of_run = np.maximum.accumulate(np.where(run_start, np.arange(n), 0))
        rank_bins = rank_bins[first_of_run]
    bins = np.empty(n, dtype=int)
    bins[order] = rank_bins
    return BinAssignment(bins, M)


def bin_stats(
    assignment: BinAssignment,
    correct: Sequence[bool],
    confidences: Sequence[float],
    edges: Optional[Sequence[float]] = None,
) -> list:
    """Per-bin count, mean correctness, mean confidence and weight.

    With ``edges`` each bin records its edges, otherwise the min/max member
    confidence.  Sums are exact (``math.fsum``) so that, e.g., ten copies of 0.7
    average to exactly 0.7.
    """
    correct = np.asarray(correct, dtype=float).reshape(-1)
    conf = np.asarray(confidences, dtype=float).reshape(-1)
    bin_of = np.asarray(assignment.bin_of)
    if not (len(correct) == len(conf) == len(bin_of)):
        raise DimensionError(
            f"length mismatch: {len(bin_of)} assignments, {len(correct)} correctness, {len(conf)} confidences"
        )
    M = assignment.num_bins
    if edges is not None and len(edges) != M + 1:
        raise DimensionError(f"{len(edges)} edges for {M} bins")
    n = len(bin_of)
    order = np.argsort(bin_of, kind="stable")
    bounds = np.searchsorted(bin_of[order], np.arange(M + 1), side="left")
    out = []
    for m in range(M):
        idx = order[bounds[m]:bounds[m + 1]]
        count = len(idx)
        lower = upper = None
        if edges is not None:
            lower, upper = float(edges[m]), float(edges[m + 1])
        if count == 0:
            out.append(BinStats(0, None, None, 0.0, lower, upper))
            continue
        members = conf[idx]
        if edges is None:
            lower, upper = float(members.min()), float(members.max())
        out.append(
            BinStats(
                count=count,
                acc=math.fsum(correct[idx].tolist()) / count,
                conf=math.fsum(members.tolist()) / count,
                weight=count / n,
                lower=lower,
                upper=upper,
            )
        )
    return out


def assign(scheme: BinningScheme, confidences) -> tuple:
    """Assignment and edges (or ``None``) for an equal-width or equal-mass scheme."""
    if isinstance(scheme, EqualWidth):
        return assign_equal_width(confidences, scheme.num_bins), equal_width_edges(scheme.num_bins)
    if isinstance(scheme, EqualMass):
        return assign_equal_mass(confidences, scheme.num_bins, scheme.ties), None
    raise ArgumentError(f"{type(scheme).__name__} does not define a fixed binning")
