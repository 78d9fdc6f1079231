"""
Quality level along the repeated ordering search
================================================

The repeated search commits one user per step and searches again on what is
left. Its first value is the quality level of the one-shot search.
"""

import numpy as np

from hiercoord.montecarlo import ScenarioSpec, mean_alpha_trace, run_scenario

TRIALS = 300

for carriers in (10, 12):
    spec = ScenarioSpec(10, n_carriers=carriers, trials=TRIALS, seed=3, algorithms=("ocsc", "mcsc"))
    trace = mean_alpha_trace(run_scenario(spec))
    print(f"N=10, K={carriers}: mean alpha* per step")
    print("  ", np.array2string(trace, precision=3))
