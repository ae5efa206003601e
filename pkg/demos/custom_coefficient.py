"""A parametrically modulated trap given as expressions in ``t``.

Modulating the spring constant at twice the natural frequency pumps
squeezing: the uncertainty product grows even though the packet starts as a
minimum-uncertainty coherent state.
"""

import numpy as np

from squeezedyn import basis_for, covariance, driving_for, expect_xp_from_initial, make_system, uncertainty_product

system = make_system("custom", g2="0.5*(1 + 0.2*cos(2*t))", g1="0.1*sin(t)", g0="0")
basis = basis_for(system, tau_max=20.0)
driving = driving_for(system, basis)

taus = np.linspace(0, 20, 11)
x, _ = expect_xp_from_initial(basis, driving, (1.0, 0.0), taus)
prod = uncertainty_product(covariance(basis, (0.0, 0.0), taus))
print(f"max Wronskian drift {basis.max_wronskian_drift:.1e}")
for t, xv, pr in zip(taus, x, prod):
    print(f"tau={t:5.1f}  <x>={xv:+.4f}  var_x*var_p={pr:.4f}")
