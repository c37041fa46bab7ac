"""
Geometry of the Poincare ball and the SPD cone
===============================================

Distances, composite distances and their invariances, checked numerically.
Runs in a second or two.
"""
import numpy as np

from symridge.hyperbolic import (MobiusElement, composite_distance, disk_distance,
                                 horocycle_points, mobius_apply, poincare_distance)
from symridge.spaces import space_descriptor
from symridge.spd import (iwasawa_composite_distance, random_orthogonal, random_spd,
                          spd_composite_distance)

rng = np.random.default_rng(0)

# distance from the origin grows like 2 artanh |x|
x = np.array([0.5, 0.0])
print("d(0, x)       =", poincare_distance(np.zeros(2), x))
print("2 artanh(0.5) =", 2 * np.arctanh(0.5))

# the SU(1,1) disk uses half the ball metric
z, w = 0.3 + 0.1j, -0.2 + 0.4j
print("ball / disk distance ratio:",
      poincare_distance([z.real, z.imag], [w.real, w.imag]) / disk_distance(z, w))

# Mobius maps preserve the disk distance
g = MobiusElement.random(rng)
print("isometry defect:", abs(disk_distance(mobius_apply(g, z), mobius_apply(g, w)) - disk_distance(z, w)))

# points on one horocycle share the composite distance to their boundary point
u = np.array([1.0, 0.0])
pts = horocycle_points(0.7, u, n=8)
print("composite distance along a horocycle:", np.round(composite_distance(pts, u), 12))

# SPD(3): the Cholesky shortcut agrees with the Iwasawa decomposition
sp = space_descriptor("spd", 3)
X = random_spd(rng, 3)
K = random_orthogonal(rng, 3)
print("spd rho vector:", sp.rho_h)
print("Cholesky vs Iwasawa:", spd_composite_distance(X, K) - iwasawa_composite_distance(X, K))
