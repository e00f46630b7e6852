"""Calibration beyond the top label: class-wise ECE and a multi-class grouping probe."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .binning import BinStats, EqualWidth, Sweep
from .confidence import binned_error, check_norm
from .core import Dataset
from .errors import ArgumentError


@dataclass(frozen=True)
class ClassCalibration:
    class_index: int
    value: float
    per_bin: list
    absent: bool  # no record carries this hard label

    def to_dict(self) -> dict:
        return {
            "class_index": self.class_index,
            "value": self.value,
            "absent": self.absent,
            "per_bin": [b.to_dict() for b in self.per_bin],
        }


@dataclass(frozen=True)
class ClasswiseReport:
    per_class: list
    mean_value: float
    scheme: dict
    norm: int
    n: int

    def to_dict(self) -> dict:
        return {
            "report_type": "classwise",
            "metric_name": "classwise_ece",
            "mean_value": self.mean_value,
            "scheme": dict(self.scheme),
            "norm": self.norm,
            "n": self.n,
            "per_class": [c.to_dict() for c in self.per_class],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClasswiseReport":
        return cls(
            per_class=[
                ClassCalibration(
                    class_index=int(c["class_index"]),
                    value=c["value"],
                    per_bin=[BinStats.from_dict(b) for b in c["per_bin"]],
                    absent=bool(c["absent"]),
                )
                for c in d["per_class"]
            ],
            mean_value=d["mean_value"],
            scheme=dict(d["scheme"]),
            norm=int(d["norm"]),
            n=int(d["n"]),
        )


def classwise_ece(dataset: Dataset, scheme=None, norm=1) -> ClasswiseReport:
    """Average over classes of the ECE of each class probability taken alone.

    For class k every sample is binned by its k-th probability; a bin's
    "accuracy" is the fraction of its samples labelled k.  Classes absent from
    the labels are kept (their frequency is 0) and flagged.
    """
    scheme = EqualWidth(10) if scheme is None else scheme
    if isinstance(scheme, Sweep):
        raise ArgumentError("class-wise ECE needs an equal-width or equal-mass scheme")
    norm = check_norm(norm)
    labels = dataset.hard_labels()
    probs = dataset.probs
    if labels.size == 0:
        raise ArgumentError("cannot compute class-wise ECE of an empty dataset")
    per_class = []
    for k in range(dataset.num_classes):
        is_k = labels == k
        value, per_bin = binned_error(probs[:, k], is_k, scheme, norm)
        per_class.append(ClassCalibration(k, value, per_bin, absent=not is_k.any()))
    mean_value = math.fsum(c.value for c in per_class) / len(per_class)
    return ClasswiseReport(per_class, mean_value, scheme.describe(), norm, int(labels.size))


@dataclass(frozen=True)
class PredictionGroup:
    vector: tuple  # rounded prediction vector shared by the group
    count: int
    frequencies: tuple  # empirical class frequencies among the group
    l1_gap: float
    tvd_gap: float

    def to_dict(self) -> dict:
        return {
            "vector": list(self.vector),
            "count": self.count,
            "frequencies": list(self.frequencies),
            "l1_gap": self.l1_gap,
            "tvd_gap": self.tvd_gap,
        }


@dataclass(frozen=True)
class MulticlassGroupReport:
    groups: list
    rounding_decimals: int
    n: int

    def to_dict(self) -> dict:
        return {
            "report_type": "multiclass",
            "metric_name": "multiclass",
            "rounding_decimals": self.rounding_decimals,
            "n": self.n,
            "groups": [g.to_dict() for g in self.groups],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MulticlassGroupReport":
        groups = [
            PredictionGroup(
                vector=tuple(g["vector"]),
                count=int(g["count"]),
                frequencies=tuple(g["frequencies"]),
                l1_gap=g["l1_gap"],
                tvd_gap=g["tvd_gap"],
            )
            for g in d["groups"]
        ]
        return cls(groups, int(d["rounding_decimals"]), int(d["n"]))


def multiclass_report(dataset: Dataset, rounding_decimals: int = 1) -> MulticlassGroupReport:
    """Group records by their rounded prediction vector and compare each
    group's label frequencies with that vector.

    Exact-vector conditioning is empty on continuous outputs, hence the
    rounding.  Groups are ordered by vector.
    """
    if isinstance(rounding_decimals, bool) or not isinstance(rounding_decimals, int) or rounding_decimals < 1:
        raise ArgumentError(f"rounding_decimals must be an integer >= 1, got {rounding_decimals!r}")
    labels = dataset.hard_labels()
    K = dataset.num_classes
    rounded = np.round(dataset.probs, rounding_decimals)
    counts = defaultdict(lambda: [0] * K)
    for row, y in zip(rounded, labels):
        # + 0.0 folds -0.0 into 0.0 so both land in one group
        counts[tuple(float(v) + 0.0 for v in row)][int(y)] += 1
    groups = []
    for vector in sorted(counts):
        class_counts = counts[vector]
        total = sum(class_counts)
        freqs = tuple(c / total for c in class_counts)
        l1 = math.fsum(abs(f - q) for f, q in zip(freqs, vector))
        groups.append(PredictionGroup(vector, total, freqs, l1, 0.5 * l1))
    return MulticlassGroupReport(groups, rounding_decimals, int(labels.size))
