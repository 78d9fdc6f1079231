"""
Spectral efficiency against energy efficiency
=============================================

Coordinated users all sit at log2(1 + gamma*) bits/s/Hz and win on bits per
joule. Water-filling users chase rate and pay for it in energy.
"""

from hiercoord.montecarlo import ScenarioSpec, sweep

TRIALS = 300
users = [2, 4, 8, 16]
spec = ScenarioSpec(2, trials=TRIALS, seed=9, algorithms=("ocsc", "mcsc", "random", "pooling"))
rows = sweep(spec, "users", users)

print("   N  algorithm   SE[bits/s/Hz]  EE[Mbit/J]")
for r in rows:
    print(f"{r.axis_value:4d}  {r.algorithm:9s}  {r.mean_se:13.3f}  {r.mean_ee / 1e6:10.4f}")
