"""
Curves whose coordinates are pairwise biquadratically related
=============================================================

Every pair (z_j, z_l) of coordinates satisfies
a z_j^2 z_l^2 + b_jl z_j^2 - 2 z_j z_l + b_lj z_l^2 + e = 0.
"""

import numpy as np

from flexpoly import epbq

# a rational curve z_j = x + mu_j / x and its coefficients
rat = epbq.Rational((0.5, -0.25, 2.0))
cf = epbq.coeffs(rat)
print("a =\n", cf.a, "\nb =\n", cf.b, "\ne =\n", cf.e)

# points are unit pairs (s, c) standing for s / c, so poles are harmless
u = np.array([-3.0, -0.1, 0.0, 0.4, 5.0])
worst = max(epbq.relation_residual(cf, epbq.eval(rat, x)).max() for x in u)
print("rational residual, including the pole at x = 0:", worst)

# an elliptic curve of the first kind with phases sigma
ell = epbq.EllipticFirst(0.6, (0.0, 0.4, 1.1), 3)
cf = epbq.coeffs(ell)
grid = np.linspace(0, epbq.period(ell), 50)
print("elliptic residual:", max(epbq.relation_residual(cf, epbq.eval(ell, x)).max() for x in grid))

# the modulus can be read back off the coefficients, even after rescaling coordinates
fit = epbq.fit_elliptic(cf.scaled([1.5, 0.3, 2.0]))
print("fitted k:", fit.k, "phases:", fit.sigma)

# the exotic curves live at the half quarter period
for alpha in (1, 2, 3):
    ex = epbq.Exotic(0.99, alpha)
    cf = epbq.coeffs(ex)
    grid = np.linspace(0, epbq.period(ex), 50)
    print(f"exotic alpha={alpha} residual:", max(epbq.relation_residual(cf, epbq.eval(ex, x)).max() for x in grid))
