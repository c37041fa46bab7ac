"""
Harmonic analysis on 2x2 SPD matrices
=====================================

Plancherel weight, the power map and a Plancherel check for a Gaussian in
the matrix logarithm.  Takes about half a minute.
"""
import numpy as np

from symridge.fourier import plancherel_check, spd_gaussian
from symridge.spaces import boundary_grid, frequency_grid, space_descriptor, spd_polar_grid
from symridge.spd import omega_constant, power_map, spd_c_function, spd_plancherel_weight

sp = space_descriptor("spd", 2)
print("Weyl group order:", sp.weyl_order, " rho:", sp.rho, " rho_h:", sp.rho_h)
print("power map of rho:", power_map(np.array(sp.rho)))

lam = np.array([[0.0, 0.0], [0.5, -0.5], [2.0, -2.0]])
rho_s = np.array(sp.rho)
# the weight is |c(i lam + rho_s)|^-2; c has a pole at lam = 0, where the weight vanishes
print("c-function:", spd_c_function(1j * lam[1:] + rho_s))
print("1/|c|^2:", 1 / np.abs(spd_c_function(1j * lam[1:] + rho_s)) ** 2)
print("Plancherel weight:", spd_plancherel_weight(lam))
print("inversion constant omega_2 =", omega_constant(2))

# both sides of the Plancherel identity
# a width-0.8 Gaussian is resolved by frequencies up to 8
f = spd_gaussian(0.8)
lhs, rhs = plancherel_check(f, sp, frequency_grid(sp, 8.0, 48), boundary_grid(sp, 16),
                            spd_polar_grid(5.0, 56, 48))
print(f"|f|^2 = {lhs:.6f}, spectral side = {rhs:.6f}, rel gap = {abs(lhs - rhs) / lhs:.2e}")
