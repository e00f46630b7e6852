import random

import numpy as np
import pytest

from calibscope import Dataset, PredictionRecord, validate_simplex

_criteria = {}


def random_dataset(rng: random.Random, n=None, K=None, soft=False, tie_prob=0.2):
    """Random labelled dataset; some probability vectors are coarsely rounded so
    that tied confidences (and bin-boundary values) actually occur."""
    n = rng.randint(1, 200) if n is None else n
    K = rng.randint(2, 5) if K is None else K
    records = []
    for i in range(n):
        raw = [rng.random() ** 2 for _ in range(K)]
        if rng.random() < tie_prob:
            raw = [round(v * 4) + 1 for v in raw]
        s = sum(raw)
        probs = validate_simplex([v / s for v in raw])
        soft_label = None
        if soft:
            w = [rng.random() for _ in range(K)]
            soft_label = validate_simplex([v / sum(w) for v in w])
        records.append(PredictionRecord(f"r{i}", probs, hard_label=rng.randrange(K), soft_label=soft_label))
    return Dataset(records, K)


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture
def np_rng():
    return np.random.default_rng(20261015)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            _criteria[item.nodeid] = mark.args


def pytest_runtest_logreport(report):
    if report.nodeid in _criteria and (report.when == "call" or report.outcome != "passed"):
        number, title = _criteria[report.nodeid]
        _criteria[report.nodeid] = (number, title, report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    rows = [v for v in _criteria.values() if len(v) == 4]
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, duration in sorted(rows, key=lambda r: r[0]):
        flag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{flag}] criterion {number}: {title} ({duration:.2f}s)")
