"""
Reconstructing a bump on the hyperbolic disk
============================================

A compactly supported bump is transformed, reconstructed from its ridgelet
density, and finally approximated by finite networks of growing size.
The last step takes a few minutes.
"""
import numpy as np

from symridge.fourier import hf_forward, plancherel_check
from symridge.profiles import fractional_laplacian, gaussian, gaussian_deriv
from symridge.ridgelet import reconstruct, scalar_product
from symridge.spaces import ball_grid, boundary_grid, frequency_grid, space_descriptor
from symridge.synthesis import disk_evaluation_set, universality_sweep
from symridge.targets import radial_bump

sp = space_descriptor("poincare_ball", 2)
xg = ball_grid(sp, 0.95, 64)
bg = boundary_grid(sp, 128)
fg = frequency_grid(sp, 20.0, 128)
f = radial_bump(0.6, 4.0)

# Helgason-Fourier spectrum: radial input, so no dependence on the boundary point
F = hf_forward(f, sp, fg, bg, xg)
print("spectrum at lambda=0 across boundary points:", np.ptp(np.abs(F.values[0])))

lhs, rhs = plancherel_check(f, sp, fg, bg, xg, F=F)
print(f"Plancherel: |f|^2 = {lhs:.6f}, spectral side = {rhs:.6f}")

# a Gaussian activation paired with Delta^{1/2} of a Gaussian derivative
sigma = gaussian(1.0)
rho = fractional_laplacian(gaussian_deriv(4, 1.4), sp.rank)
print("<<sigma, rho>> =", scalar_product(sigma, rho, sp))

ev = disk_evaluation_set(0.8, 9, 12)
rec = reconstruct(f, sigma, rho, sp, xg, bg)
err = np.max(np.abs(rec(ev.nodes) - f(ev.nodes)))
print("continuous network, sup error on |x| <= 0.8:", err)

# finite networks: one atom per cell of the parameter box
rows, nets = universality_sweep(f, sigma, gaussian_deriv(4, 1.4), sp,
                                [(16.0, 4), (16.0, 8), (16.0, 16)], xg, ev)
for r in rows:
    print(f"n={r['n_level']:3d}  atoms={r['atoms']:6d}  sup error={r['sup_error']:.4f}")
