"""
How often the ordering search lands on an exact equilibrium
============================================================

A quality level above 1/(1+gamma*) certifies that no user wants to move.
This script estimates how often that happens as the network grows, for two
readings of Rayleigh fading: gains drawn as the amplitude |h| (the default)
or as the power |h|^2.
"""

from hiercoord import EfficiencyModel
from hiercoord.montecarlo import ScenarioSpec, aggregate, run_scenario

TRIALS = 500
threshold = EfficiencyModel(100).equilibrium_threshold

print("fading       N   P(exact)  P(alpha >= threshold)  mean alpha*")
for fading in ("rayleigh", "exponential"):
    for n in (2, 5, 10, 20, 30):
        spec = ScenarioSpec(n, trials=TRIALS, seed=11, algorithms=("ocsc",), fading=fading)
        (row,) = aggregate(run_scenario(spec), spec.algorithms, threshold, axis_value=n)
        print(f"{fading:11s} {n:3d}   {row.prob_exact:7.3f}   {row.prob_alpha_ge_threshold:20.3f}  {row.mean_alpha_star:10.3f}")
