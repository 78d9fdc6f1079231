"""
Energy efficiency against SNR
=============================

Five users on five carriers. Coordinated users transmit just enough to reach
gamma*, so their energy efficiency scales with 1/sigma^2 and vanishes at low
SNR.
"""

from hiercoord.montecarlo import ScenarioSpec, sweep

TRIALS = 300
snrs = [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]
spec = ScenarioSpec(5, trials=TRIALS, seed=5, algorithms=("ocsc", "mcsc", "random", "pooling", "exhaustive"))
rows = sweep(spec, "snr", snrs)

table = {(r.axis_value, r.algorithm): r for r in rows}
print(" SNR[dB]" + "".join(f"{a:>12s}" for a in spec.algorithms) + "   [Mbit/J per user]")
for s in snrs:
    print(f"{s:8.1f}" + "".join(f"{table[s, a].mean_ee / 1e6:12.4f}" for a in spec.algorithms))
