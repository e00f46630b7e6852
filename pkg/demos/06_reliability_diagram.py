"""
Reliability diagram and the command line
========================================

Builds the per-bin data behind a reliability diagram, writes it as JSON and
SVG, then runs the same steps through the ``calibscope`` command.
"""
import subprocess
import sys
import tempfile
from pathlib import Path

from calibscope import CalibratedWorld, EqualWidth, distort_temperature, emit_dataset, emit_report, gen_calibrated_world, reliability_data
from calibscope.svg import reliability_svg

out = Path(tempfile.mkdtemp(prefix="calibscope-demo-"))
d = distort_temperature(gen_calibrated_world(CalibratedWorld(n=2000, K=5, seed=3)), 0.6)

rel = reliability_data(d, EqualWidth(10))
emit_report(rel, path=out / "reliability.json")
(out / "reliability.svg").write_text(reliability_svg(rel, title="T = 0.6"))
print(f"ECE {rel.value:.4f}; diagram written to {out / 'reliability.svg'}", flush=True)

emit_dataset(d, out / "preds.jsonl")
cli = [sys.executable, "-m", "calibscope"]
subprocess.run(cli + ["inspect", "-i", str(out / "preds.jsonl")], check=True)
subprocess.run(cli + ["evaluate", "-i", str(out / "preds.jsonl"), "-o", str(out / "report.json"),
                      "--metrics", "ece,classwise-ece", "--scheme", "equal-mass", "--bins", "15"], check=True)
subprocess.run(cli + ["diagram", "-i", str(out / "preds.jsonl"), "-o", str(out / "cli-rel.json")], check=True)
print("outputs:", sorted(p.name for p in out.iterdir()))
