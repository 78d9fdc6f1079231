"""
Energy efficiency as the network grows
======================================

Average energy efficiency per user at SNR 10 dB with as many carriers as
users. Pass a file name to also save the table as CSV or JSON.
"""

import sys

from hiercoord.io import write_table
from hiercoord.montecarlo import ScenarioSpec, sweep

TRIALS = 300
users = list(range(2, 17, 2))
spec = ScenarioSpec(2, trials=TRIALS, seed=5, algorithms=("ocsc", "mcsc", "random", "pooling", "exhaustive"))
rows = sweep(spec, "users", users)

table = {(r.axis_value, r.algorithm): r for r in rows}
print("   N" + "".join(f"{a:>12s}" for a in spec.algorithms) + "   [Mbit/J per user]")
for n in users:
    print(f"{n:4d}" + "".join(f"{table[n, a].mean_ee / 1e6:12.4f}" for a in spec.algorithms))

if len(sys.argv) > 1:
    path = sys.argv[1]
    fmt = "json" if path.endswith(".json") else "csv"
    write_table(path, rows, {"script": "users_sweep", "spec": spec.as_dict(), "values": users}, fmt)
    print(f"wrote {path}")
