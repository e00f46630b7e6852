"""
Comparing predictions to annotator disagreement
===============================================

When several annotators label each item, their vote distribution is a soft
label.  EntCE compares entropies, DistCE is the total variation distance and
RankCS asks whether the model orders the classes the same way the humans do.
"""
from calibscope import Dataset, PredictionRecord, human_report, validate_simplex, votes_to_distribution

votes = {
    "easy": [0, 0, 0, 0, 0],
    "split": [0, 1, 0, 1, 2],
    "hard": [2, 1, 0, 2, 1],
}
preds = {
    "easy": [0.9, 0.05, 0.05],
    "split": [0.2, 0.7, 0.1],
    "hard": [0.34, 0.33, 0.33],
}
records = [
    PredictionRecord(k, validate_simplex(preds[k]), soft_label=votes_to_distribution(v, 3))
    for k, v in votes.items()
]
report = human_report(Dataset(records, 3))

for s in report.per_sample:
    print(f"{s.id:>6}: EntCE {s.entce:+.3f}  DistCE {s.distce:.3f}  rank match {s.rank_match}  ties {s.ties}")
print(f"mean |EntCE| {report.mean_abs_entce:.3f}, mean DistCE {report.mean_abs_distce:.3f}, RankCS {report.rankcs:.3f}")

# EntCE is blind to which class gets which probability
swapped = PredictionRecord("x", validate_simplex([0.1, 0.2, 0.7]), soft_label=validate_simplex([0.7, 0.2, 0.1]))
from calibscope import distce, entce

print(f"permuted copy: EntCE {entce(swapped):.3g}, DistCE {distce(swapped):.3g}")
