"""
A useless classifier with a perfect ECE
=======================================

Every record gets the class prior as its prediction.  Top-label accuracy
equals the reported confidence, so ECE is exactly zero under any binning,
even though the model never distinguishes one input from another.
"""
from calibscope import EqualMass, EqualWidth, MajorityPathology, ece, gen_majority_pathology
from calibscope.core import top_predictions

data = gen_majority_pathology(MajorityPathology((7, 2, 1), 0.7, strict=True))
conf, correct = top_predictions(data)
print(f"confidence always {conf[0]}, accuracy {correct.mean()}")

for M in (5, 10):
    print(f"equal-width M={M:2d}: ECE = {ece(data, EqualWidth(M)).value}")
for M in (1, 5, 10):
    print(f"equal-mass  M={M:2d}: ECE = {ece(data, EqualMass(M)).value}")

# the class-wise view is not fooled: minority classes are never predicted
from calibscope import classwise_ece

print(f"class-wise ECE (M=10): {classwise_ece(data, EqualWidth(10)).mean_value:.4f}")
