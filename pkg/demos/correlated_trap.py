"""
When the order of play matters
==============================

On strongly correlated channels everybody wants the same carrier. The
ordering search finds the one order that lets every user keep almost all of
its best utility, while a bad order leaves a user with nothing.
"""

import itertools

import numpy as np

from hiercoord import EfficiencyModel, compute_utilities, delta_ocsc, max_utilities, pi_csc, quality_ratios
from hiercoord.baselines import ladder_gains, prop2_certificate
from hiercoord.coordination import min_position_ratio
from hiercoord.game import GameConfig

eps = 0.01
n = 4
config = GameConfig.uniform(n)
model = EfficiencyModel(100)
gains = ladder_gains(n, n, eps)
print("gains:\n", gains)

ratios = quality_ratios(gains)
peak = max_utilities(config, gains, model)

# The ordering search and its guarantee.
ocsc = delta_ocsc(config, gains, model)
share = compute_utilities(config, gains, ocsc.allocation, model).utilities / peak
print(f"\nsearched ordering {ocsc.ordering}, alpha* = {ocsc.alpha_star:.4f}")
print("share of own best:", np.round(share, 4))

# Every ordering, ranked by the worst share it can force.
print("\nordering       certificate  worst share")
scores = sorted(
    ((min_position_ratio(ratios, p), p) for p in itertools.permutations(range(n))),
    reverse=True,
)
for cert, perm in scores[:3] + scores[-3:]:
    out = pi_csc(config, gains, perm, model, allow_idle=True)
    worst = (compute_utilities(config, gains, out.allocation, model).utilities / peak).min()
    print(f"{str(perm):13s}  {prop2_certificate(ratios, perm):11.4f}  {worst:.4f}")
