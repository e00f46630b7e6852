"""Domain types and scalar primitives.

A prediction is a point on the probability simplex.  Everything downstream
(binning, ECE, class-wise and human-uncertainty measures) is built from the
handful of functions here: ``validate_simplex``, ``argmax_class``,
``max_confidence``, ``entropy`` and ``tvd``.

Class indices are 0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DimensionError, LengthError, MissingLabelError, MissingSoftLabelError, SchemaError, SimplexError

DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class ProbVector:
    """A validated probability vector of length K >= 2.

    Build instances with :func:`validate_simplex`; the constructor trusts its
    input.
    """

    values: tuple

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


def validate_simplex(raw: Iterable[float], tol: float = DEFAULT_TOL) -> ProbVector:
    """Check that ``raw`` lies on the simplex (within ``tol``) and renormalize.

    Entries within ``tol`` outside [0, 1] are clamped; the result is divided by
    its sum so that downstream code sees an exact simplex point.
    """
    values = [float(v) for v in raw]
    if len(values) < 2:
        raise LengthError(f"probability vector needs at least 2 entries, got {len(values)}")
    for k, v in enumerate(values):
        if not math.isfinite(v) or v < -tol or v > 1.0 + tol:
            raise SimplexError(f"entry {k} = {v!r} outside [0, 1]")
    values = [min(max(v, 0.0), 1.0) for v in values]
    total = math.fsum(values)
    if abs(total - 1.0) > tol:
        raise SimplexError(f"entries sum to {total!r}, not 1")
    if total != 1.0:
        values = [v / total for v in values]
    return ProbVector(tuple(values))


def argmax_class(p: ProbVector | Sequence[float]) -> int:
    """Index of the largest entry; ties go to the lowest index."""
    values = tuple(p)
    best = 0
    for k in range(1, len(values)):
        if values[k] > values[best]:
            best = k
    return best


def max_confidence(p: ProbVector | Sequence[float]) -> float:
    return max(p)


def entropy(p: ProbVector | Sequence[float]) -> float:
    """Shannon entropy in nats, with 0 ln 0 taken as 0."""
    return -math.fsum(v * math.log(v) for v in p if v > 0.0)


def tvd(p: ProbVector | Sequence[float], q: ProbVector | Sequence[float]) -> float:
    """Total variation distance, half the L1 distance between ``p`` and ``q``."""
    a, b = tuple(p), tuple(q)
    if len(a) != len(b):
        raise DimensionError(f"vectors have different lengths ({len(a)} vs {len(b)})")
    return 0.5 * math.fsum(abs(x - y) for x, y in zip(a, b))


@dataclass(frozen=True)
class PredictionRecord:
    """One sample: model output plus a hard label, a soft label, or both.

    ``hard_label_derived`` marks labels obtained by majority vote at ingest.
    """

    id: str
    probs: ProbVector
    hard_label: Optional[int] = None
    soft_label: Optional[ProbVector] = None
    hard_label_derived: bool = False

    def __post_init__(self):
        K = len(self.probs)
        if self.hard_label is None and self.soft_label is None:
            raise SchemaError(f"record {self.id!r} has neither a hard nor a soft label")
        if self.hard_label is not None and not 0 <= self.hard_label < K:
            raise SchemaError(f"record {self.id!r}: label {self.hard_label} outside [0, {K - 1}]")
        if self.soft_label is not None and len(self.soft_label) != K:
            raise SchemaError(
                f"record {self.id!r}: soft label has {len(self.soft_label)} entries, probs has {K}"
            )

    @property
    def num_classes(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class Dataset:
    """Records sharing a class count K, with unique ids."""

    records: tuple
    num_classes: int
    class_names: Optional[tuple] = None
    _index: dict = field(default=None, repr=False, compare=False)

    def __init__(self, records, num_classes=None, class_names=None):
        records = tuple(records)
        if num_classes is None:
            if not records:
                raise SchemaError("cannot infer the class count of an empty dataset")
            num_classes = records[0].num_classes
        if num_classes < 2:
            raise LengthError(f"need at least 2 classes, got {num_classes}")
        if class_names is not None:
            class_names = tuple(class_names)
            if len(class_names) != num_classes:
                raise SchemaError(f"{len(class_names)} class names for {num_classes} classes")
        index = {}
        for pos, r in enumerate(records):
            if r.num_classes != num_classes:
                raise SchemaError(
                    f"record {r.id!r} has {r.num_classes} classes, dataset has {num_classes}"
                )
            if r.id in index:
                raise SchemaError(f"duplicate record id {r.id!r}")
            index[r.id] = pos
        object.__setattr__(self, "records", records)
        object.__setattr__(self, "num_classes", num_classes)
        object.__setattr__(self, "class_names", class_names)
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def by_id(self, record_id: str) -> PredictionRecord:
        return self.records[self._index[record_id]]

    @property
    def ids(self) -> list:
        return [r.id for r in self.records]

    @cached_property
    def probs(self) -> np.ndarray:
        """(n, K) matrix of model probabilities."""
        if not self.records:
            return np.zeros((0, self.num_classes))
        return np.array([r.probs.values for r in self.records], dtype=float)

    def hard_labels(self) -> np.ndarray:
        """Hard labels as an int array; raises if any record lacks one."""
        missing = [r.id for r in self.records if r.hard_label is None]
        if missing:
            raise MissingLabelError(
                f"{len(missing)} record(s) lack a hard label, e.g. {missing[:5]}"
            )
        return np.array([r.hard_label for r in self.records], dtype=int)

    def soft_labels(self) -> np.ndarray:
        missing = [r.id for r in self.records if r.soft_label is None]
        if missing:
            raise MissingSoftLabelError(
                f"{len(missing)} record(s) lack a soft label: {missing[:20]}"
            )
        return np.array([r.soft_label.values for r in self.records], dtype=float).reshape(
            len(self.records), self.num_classes
        )

    @property
    def has_hard_labels(self) -> bool:
        return all(r.hard_label is not None for r in self.records)

    @property
    def has_soft_labels(self) -> bool:
        return all(r.soft_label is not None for r in self.records)


def top_predictions(dataset: Dataset):
    """Return ``(confidences, correct)`` arrays for the top-label view.

    Correctness compares the lowest-index argmax with the hard label.
    """
    labels = dataset.hard_labels()
    probs = dataset.probs
    if len(labels) == 0:
        return np.zeros(0), np.zeros(0, dtype=bool)
    predicted = np.argmax(probs, axis=1)
    return probs.max(axis=1), predicted == labels
