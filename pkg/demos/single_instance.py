"""
Coordinating one small network
==============================

Draw one 5 x 5 channel matrix and compare how the coordination algorithms
share the carriers.
"""

import numpy as np

from hiercoord import (
    EfficiencyModel,
    GameConfig,
    compute_utilities,
    delta_mcsc,
    delta_ocsc,
    equilibrium_check,
    exhaustive_optimum,
    max_utilities,
    random_coordination,
)
from hiercoord.coordination import outcome_from_assignment
from hiercoord.montecarlo import generate_channels

# Five users, five carriers, SNR 10 dB, 1 Mbit/s per user.
config = GameConfig.uniform(5, snr_db=10.0)
model = EfficiencyModel(config.efficiency_order)
channels = generate_channels(5, 5, seed=2024, fading="rayleigh")
np.set_printoptions(precision=3, suppress=True)
print("gains:\n", channels.gains)

ocsc = delta_ocsc(config, channels, model)
mcsc, trace = delta_mcsc(config, channels, model)
rand = random_coordination(config, channels, model, rng_seed=7)
best = exhaustive_optimum(config, channels, model)
optimum = outcome_from_assignment(config, channels, best.best_assignment, model, "exhaustive")

# Each user's utility as a fraction of what it would get alone on its best carrier.
peak = max_utilities(config, channels, model)
print("\nalgorithm   ordering         assignment       alpha*  welfare[Mbit/J]  exact  share of own best")
for outcome in (ocsc, mcsc, rand, optimum):
    util = compute_utilities(config, channels, outcome.allocation, model)
    report = equilibrium_check(config, channels, outcome, model)
    print(
        f"{outcome.algorithm:10s}  {str(outcome.ordering):15s}  {str(outcome.assignment):15s}  "
        f"{outcome.alpha_star:6.3f}  {util.welfare / 1e6:14.3f}  {str(report.is_exact):5s}  "
        f"{np.round(util.utilities / peak, 3)}"
    )

print("\nquality level after each commitment of the repeated search:", np.round(trace, 3))
