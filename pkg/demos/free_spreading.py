"""A free packet spreads; squeezing can make it first contract, then spread faster.

With squeeze phase ``theta = pi/2`` the initial state carries a negative
position-momentum correlation, so the packet focuses before it spreads.
``theta = 0`` and ``theta = pi`` start narrow or wide and only spread.
"""

import numpy as np

from squeezedyn import analytic_basis, covariance, make_system

system = make_system("FP")
basis = analytic_basis(system)
taus = np.linspace(0, 4, 9)

for z in [(0.0, 0.0), (0.6, 0.0), (0.6, np.pi), (0.6, np.pi / 2)]:
    var_x = covariance(basis, z, taus).var_x
    print(f"r={z[0]:.1f} theta={z[1]:.2f}: " + " ".join(f"{v:6.3f}" for v in var_x))
