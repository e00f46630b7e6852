"""Calibration against human label distributions (soft labels).

Per sample, with soft label ``y`` and model output ``p``:

* ``entce = H(y) - H(p)`` (nats); positive means the model is more certain
  than the annotators.  Blind to permutations of the entries.
* ``distce = TVD(y, p)``.
* rank match: ``argsort(y) == argsort(p)``, both ascending with ties broken
  by the lower class index.  Blind to the magnitudes of the entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Dataset, PredictionRecord, ProbVector, entropy, tvd
from .errors import ArgumentError, MissingSoftLabelError


def votes_to_distribution(votes: Sequence[int], K: int) -> ProbVector:
    """Frequency distribution of annotator votes over K classes."""
    if K < 2:
        raise ArgumentError(f"need at least 2 classes, got {K}")
    if len(votes) == 0:
        raise ArgumentError("need at least one vote")
    counts = [0] * K
    for v in votes:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < K:
            raise ArgumentError(f"vote {v!r} outside [0, {K - 1}]")
        counts[v] += 1
    A = len(votes)
    return ProbVector(tuple(c / A for c in counts))


def majority_vote(votes: Sequence[int], K: int) -> int:
    """Most frequent vote, lowest class index on ties."""
    counts = np.bincount(np.asarray(votes, dtype=int), minlength=K)
    return int(np.argmax(counts))


def _soft(record: PredictionRecord) -> ProbVector:
    if record.soft_label is None:
        raise MissingSoftLabelError(f"record {record.id!r} has no soft label")
    return record.soft_label


def entce(record: PredictionRecord) -> float:
    return entropy(_soft(record)) - entropy(record.probs)


def distce(record: PredictionRecord) -> float:
    return tvd(_soft(record), record.probs)


def rank_order(p) -> tuple:
    """Ascending argsort; equal entries ordered by class index."""
    return tuple(int(i) for i in np.argsort(np.asarray(tuple(p), dtype=float), kind="stable"))


def has_ties(p) -> bool:
    values = tuple(p)
    return len(set(values)) < len(values)


def rank_match(record: PredictionRecord) -> bool:
    return rank_order(_soft(record)) == rank_order(record.probs)


def _require_soft(dataset: Dataset):
    missing = [r.id for r in dataset if r.soft_label is None]
    if missing:
        raise MissingSoftLabelError(f"records without a soft label: {missing}")


def rankcs(dataset: Dataset) -> float:
    """Fraction of samples whose model and human rankings agree exactly."""
    _require_soft(dataset)
    if len(dataset) == 0:
        raise ArgumentError("RankCS of an empty dataset is undefined")
    return sum(rank_match(r) for r in dataset) / len(dataset)


@dataclass(frozen=True)
class SampleHumanCalibration:
    id: str
    entce: float
    distce: float
    rank_match: bool
    ties: bool  # either distribution has tied entries, so the tie rule decided the ranking

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "entce": self.entce,
            "distce": self.distce,
            "rank_match": self.rank_match,
            "ties": self.ties,
        }


@dataclass(frozen=True)
class HumanCalibReport:
    per_sample: list
    mean_abs_entce: float
    mean_abs_distce: float
    rankcs: float

    @property
    def n(self) -> int:
        return len(self.per_sample)

    def to_dict(self) -> dict:
        return {
            "report_type": "human",
            "metric_name": "human_uncertainty",
            "n": self.n,
            "mean_abs_entce": self.mean_abs_entce,
            "mean_abs_distce": self.mean_abs_distce,
            "rankcs": self.rankcs,
            "per_sample": [s.to_dict() for s in self.per_sample],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HumanCalibReport":
        return cls(
            per_sample=[
                SampleHumanCalibration(s["id"], s["entce"], s["distce"], bool(s["rank_match"]), bool(s["ties"]))
                for s in d["per_sample"]
            ],
            mean_abs_entce=d["mean_abs_entce"],
            mean_abs_distce=d["mean_abs_distce"],
            rankcs=d["rankcs"],
        )


def human_report(dataset: Dataset) -> HumanCalibReport:
    """Per-sample EntCE, DistCE and rank match with dataset aggregates
    E|EntCE|, E|DistCE| and RankCS."""
    _require_soft(dataset)
    if len(dataset) == 0:
        raise ArgumentError("human-uncertainty report of an empty dataset is undefined")
    rows = [
        SampleHumanCalibration(
            id=r.id,
            entce=entce(r),
            distce=distce(r),
            rank_match=rank_match(r),
            ties=has_ties(r.soft_label) or has_ties(r.probs),
        )
        for r in dataset
    ]
    n = len(rows)
    return HumanCalibReport(
        per_sample=rows,
        mean_abs_entce=math.fsum(abs(s.entce) for s in rows) / n,
        mean_abs_distce=math.fsum(abs(s.distce) for s in rows) / n,
        rankcs=sum(s.rank_match for s in rows) / n,
    )
