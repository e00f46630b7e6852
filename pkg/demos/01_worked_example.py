"""
Expected calibration error on a small hand-checkable dataset
============================================================

Nine predictions over three classes.  We bin the top-label confidences into
five equal-width bins and read off accuracy, mean confidence and the gap per
bin.  Run from the repository root: ``python3 demos/01_worked_example.py``.
"""
from pathlib import Path

from calibscope import EqualWidth, ece, ingest

here = Path(__file__).resolve().parent
data = ingest(here.parent / "tests" / "data" / "worked_example.jsonl")
print(f"{len(data)} records, {data.num_classes} classes")

report = ece(data, EqualWidth(5))
print(f"ECE (M=5): {report.value:.5f}")

# per-bin table; empty bins carry no accuracy or confidence
for m, b in enumerate(report.per_bin):
    if b.count == 0:
        print(f"  bin {m} ({b.lower:.1f}, {b.upper:.1f}]  empty")
    else:
        print(f"  bin {m} ({b.lower:.1f}, {b.upper:.1f}]  n={b.count}  acc={b.acc:.3f}  conf={b.conf:.3f}  gap={b.gap:.3f}")
