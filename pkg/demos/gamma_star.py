"""
The operating SINR of an energy-efficient transmitter
======================================================

A user that maximises bits per joule on a single carrier settles at the SINR
where the tangent of the efficiency curve passes through the origin.
"""

import math

import numpy as np

from hiercoord import EfficiencyModel, efficiency_value, solve_gamma_star

# The efficiency function (1 - e^-x)^M for a 100-bit packet, and its
# operating point.
model = EfficiencyModel(100)
print(f"gamma* = {model.gamma_star:.6f} ({10 * math.log10(model.gamma_star):.3f} dB)")
print(f"f(gamma*) = {model.peak_success:.4f}")
print(f"equilibrium threshold 1/(1+gamma*) = {model.equilibrium_threshold:.4f}")
print(f"spectral efficiency log2(1+gamma*) = {math.log2(1 + model.gamma_star):.4f} bits/s/Hz")

# f(x)/x is the utility per unit rate at unit gain and noise; its peak sits at gamma*.
x = np.linspace(0.5, 15.0, 30)
ratio = efficiency_value(model, x) / x
print("\n    x     f(x)/x")
for xi, ri in zip(x[::3], ratio[::3]):
    print(f"{xi:6.2f}  {ri:.5f}")

# Longer packets need a higher SINR to get through.
print("\n    M   gamma*   dB")
for order in (2, 10, 50, 100, 500, 1000):
    g = solve_gamma_star(order)
    print(f"{order:5d}  {g:7.4f}  {10 * math.log10(g):5.2f}")
