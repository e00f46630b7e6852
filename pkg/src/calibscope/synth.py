"""Synthetic datasets with known calibration behaviour.

Random draws use ``numpy.random.Generator(numpy.random.PCG64(seed))``.  The
bit stream of PCG64 is fixed by NumPy's stability policy for a given seed, so
the same spec yields the same dataset on every platform.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence, Union

import numpy as np

from .core import Dataset, PredictionRecord, ProbVector, validate_simplex
from .errors import ArgumentError


@dataclass(frozen=True)
class MajorityPathology:
    """Always predict the majority class with a fixed confidence."""

    class_counts: tuple
    confidence: float
    strict: bool = False

    def __post_init__(self):
        counts = tuple(int(c) for c in self.class_counts)
        object.__setattr__(self, "class_counts", counts)
        K = len(counts)
        if K < 2:
            raise ArgumentError(f"need at least 2 classes, got {K}")
        if any(c < 0 for c in counts) or sum(counts) < 1:
            raise ArgumentError(f"class counts must be non-negative with a positive total, got {counts}")
        if not (1.0 / K < self.confidence <= 1.0):
            raise ArgumentError(f"confidence must lie in (1/K, 1] = ({1.0 / K:.6g}, 1], got {self.confidence}")
        if self.strict:
            top = max(counts)
            if counts.count(top) > 1:
                raise ArgumentError(f"majority class is not unique in {counts}")
            prevalence = top / sum(counts)
            if abs(self.confidence - prevalence) > 1e-12:
                raise ArgumentError(
                    f"strict mode needs confidence equal to the majority prevalence {prevalence!r}"
                )

    def to_dict(self) -> dict:
        return {"kind": "majority", "class_counts": list(self.class_counts),
                "confidence": self.confidence, "strict": self.strict}


@dataclass(frozen=True)
class CalibratedWorld:
    """Probabilities ~ Dirichlet(concentration), labels drawn from those probabilities."""

    n: int
    K: int
    seed: int
    concentration: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ArgumentError(f"n must be at least 1, got {self.n}")
        if self.K < 2:
            raise ArgumentError(f"K must be at least 2, got {self.K}")
        if self.concentration <= 0:
            raise ArgumentError(f"concentration must be positive, got {self.concentration}")

    def to_dict(self) -> dict:
        return {"kind": "world", **asdict(self)}


@dataclass(frozen=True)
class Distorted:
    base: CalibratedWorld
    temperature: float

    def __post_init__(self):
        if not self.temperature > 0:
            raise ArgumentError(f"temperature must be positive, got {self.temperature}")

    def to_dict(self) -> dict:
        return {"kind": "distorted", "base": self.base.to_dict(), "temperature": self.temperature}


SynthSpec = Union[MajorityPathology, CalibratedWorld, Distorted]


def _majority_vector(K: int, top: int, confidence: float) -> ProbVector:
    rest = (1.0 - confidence) / (K - 1)
    values = [rest] * K
    values[top] = confidence
    if math.fsum(values) == 1.0:
        return ProbVector(tuple(values))
    return validate_simplex(values)


def gen_majority_pathology(spec: MajorityPathology) -> Dataset:
    """Every record gets the same vector: ``confidence`` on the majority class
    (lowest index on ties), the rest spread evenly.  Labels realize the
    class counts in class order."""
    counts = spec.class_counts
    K = len(counts)
    top = int(np.argmax(counts))
    probs = _majority_vector(K, top, spec.confidence)
    records = []
    for label, count in enumerate(counts):
        for _ in range(count):
            records.append(PredictionRecord(f"maj-{len(records):05d}", probs, hard_label=label))
    return Dataset(records, K)


def gen_calibrated_world(spec: CalibratedWorld) -> Dataset:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    probs = rng.dirichlet(np.full(spec.K, spec.concentration), size=spec.n)
    u = rng.random(spec.n)
    labels = np.minimum((np.cumsum(probs, axis=1) < u[:, None]).sum(axis=1), spec.K - 1)
    width = len(str(spec.n - 1))
    records = [
        PredictionRecord(f"w{i:0{width}d}", validate_simplex(row), hard_label=int(y))
        for i, (row, y) in enumerate(zip(probs.tolist(), labels.tolist()))
    ]
    return Dataset(records, spec.K)


def distort_temperature(dataset: Dataset, temperature: float) -> Dataset:
    """Map every probability vector through p_k -> p_k**(1/T), renormalized.

    T < 1 sharpens (overconfident), T > 1 flattens (underconfident), T = 1
    leaves the data unchanged.  Labels and ids are kept.
    """
    if not temperature > 0:
        raise ArgumentError(f"temperature must be positive, got {temperature}")
    if temperature == 1.0:
        return dataset
    p = dataset.probs
    with np.errstate(divide="ignore"):
        logits = np.log(p) / temperature
    logits -= logits.max(axis=1, keepdims=True)
    scaled = np.exp(logits)
    scaled /= scaled.sum(axis=1, keepdims=True)
    records = [
        PredictionRecord(r.id, validate_simplex(row), r.hard_label, r.soft_label, r.hard_label_derived)
        for r, row in zip(dataset.records, scaled.tolist())
    ]
    return Dataset(records, dataset.num_classes, dataset.class_names)


def generate(spec: SynthSpec) -> Dataset:
    if isinstance(spec, MajorityPathology):
        return gen_majority_pathology(spec)
    if isinstance(spec, CalibratedWorld):
        return gen_calibrated_world(spec)
    if isinstance(spec, Distorted):
        return distort_temperature(gen_calibrated_world(spec.base), spec.temperature)
    raise ArgumentError(f"unknown synth spec {spec!r}")
