"""A constant force shifts the trap centre; the packet orbits the new centre.

For ``V = omega^2 x^2 / 2 + kappa x / 2`` the equilibrium sits at
``-kappa / (2 omega^2)``.  Started at rest at the origin the mean position
swings between 0 and twice that offset.
"""

import numpy as np

from squeezedyn import analytic_basis, driving_for, expect_xp_from_initial, make_system

system = make_system("DHO", omega=1.0, kappa=2.0)
basis = analytic_basis(system)
driving = driving_for(system, basis)

taus = np.linspace(0, 2 * np.pi, 9)
x, p = expect_xp_from_initial(basis, driving, (0.0, 0.0), taus)
for t, xv, pv in zip(taus, x, p):
    print(f"tau={t:5.2f}  <x>={xv:+.4f}  <p>={pv:+.4f}")
