"""Check the closed-form moments against a direct grid solution of the Schroedinger equation."""

import numpy as np

from squeezedyn import analytic_basis, covariance, driving_for, expect_xp_from_initial, make_system
from squeezedyn.oracle import SpatialGrid, run_oracle

system = make_system("LP", kappa=1.0)
basis = analytic_basis(system)
driving = driving_for(system, basis)
point, z = (0.5, 0.8), (0.5, np.pi)
taus = [1.0, 2.0, 3.0]

grid = SpatialGrid.symmetric(30.0, 4096)
for t, m in zip(taus, run_oracle(system, basis, point, z, grid, 1e-3, taus)):
    x, p = expect_xp_from_initial(basis, driving, point, t)
    c = covariance(basis, z, t)
    print(f"tau={t}: d<x>={m.x - x:+.1e} d<p>={m.p - p:+.1e} "
          f"var_x rel={m.var_x / c.var_x - 1:+.1e} var_p rel={m.var_p / c.var_p - 1:+.1e}")
