"""Breathing of a squeezed packet in a harmonic well.

The width oscillates at twice the trap frequency while the centre follows
the classical orbit.  The uncertainty product touches 1/4 twice per period.
"""

import numpy as np

from squeezedyn import analytic_basis, covariance, driving_for, expect_xp_from_initial, make_system, uncertainty_product

system = make_system("HO", omega=1.0)
basis = analytic_basis(system)
driving = driving_for(system, basis)

z = (0.8, 0.0)  # squeeze magnitude and phase
taus = np.linspace(0, 2 * np.pi, 9)
x, p = expect_xp_from_initial(basis, driving, (1.0, 0.0), taus)
cov = covariance(basis, z, taus)

print(f"{'tau':>6} {'<x>':>8} {'<p>':>8} {'var_x':>8} {'var_p':>8} {'product':>8}")
for row in zip(taus, x, p, cov.var_x, cov.var_p, uncertainty_product(cov)):
    print(" ".join(f"{v:8.4f}" for v in row))
