"""
Calibration of every class, not just the winner
================================================

Top-label ECE only looks at the largest probability.  Class-wise ECE bins
each class probability separately; the multi-class probe groups records by
their (rounded) whole prediction vector and compares it to the class
frequencies observed within the group.
"""
from calibscope import CalibratedWorld, EqualWidth, classwise_ece, distort_temperature, gen_calibrated_world, multiclass_report

world = gen_calibrated_world(CalibratedWorld(n=4000, K=3, seed=7))
hot = distort_temperature(world, 2.0)  # underconfident

for name, d in (("calibrated", world), ("T=2.0", hot)):
    report = classwise_ece(d, EqualWidth(10))
    per_class = ", ".join(f"{c.value:.4f}" for c in report.per_class)
    print(f"{name:>10}: class-wise ECE {report.mean_value:.4f}  ({per_class})")

groups = multiclass_report(hot, rounding_decimals=1)
print(f"{len(groups.groups)} distinct rounded vectors; largest groups:")
for g in sorted(groups.groups, key=lambda g: -g.count)[:5]:
    freq = tuple(round(f, 3) for f in g.frequencies)
    print(f"  {g.vector}  n={g.count:4d}  observed {freq}  tvd {g.tvd_gap:.3f}")
