"""
Jacobi elliptic functions from the arithmetic-geometric mean
============================================================

Quarter periods, sn/cn/dn and the inverse of dn, all computed without scipy.
"""

import math

import numpy as np

from flexpoly.elliptic import complementary, inverse_dn, quarter_periods, sn_cn_dn

# K and K' for a handful of moduli; K' grows without bound as k -> 0
for k in (0.1, 0.5, 0.9, 0.999):
    K, Kp = quarter_periods(k)
    print(f"k = {k:<6} K = {K:.15f}  K' = {Kp:.15f}")

# sn, cn, dn on a grid; the identities hold to rounding
k = 0.8
u = np.linspace(-6, 6, 9)
sn, cn, dn = sn_cn_dn(u, k)
print("sn^2 + cn^2 - 1:", np.max(np.abs(sn**2 + cn**2 - 1)))
print("dn^2 + k^2 sn^2 - 1:", np.max(np.abs(dn**2 + k * k * sn**2 - 1)))

# half a quarter period has closed-form values
kp = complementary(k)
s, c, d = sn_cn_dn(quarter_periods(k)[0] / 2, k)
print("dn(K/2) - sqrt(k'):", d - math.sqrt(kp))

# dn is decreasing on [0, K], so it can be inverted there
u0 = 0.7
print("inverse_dn(dn(0.7)):", inverse_dn(sn_cn_dn(u0, k)[2], k))
