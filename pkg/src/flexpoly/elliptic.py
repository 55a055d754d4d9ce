"""Jacobi elliptic functions for real arguments and modulus 0 <= k <= 1.

Everything is computed from the arithmetic-geometric mean: quarter periods
directly, and sn, cn, dn by the descending Landen recursion on the amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

_AGM_TOL = 1e-16
_MAX_STEPS = 64


def agm(a: float, b: float) -> float:
    for _ in range(_MAX_STEPS):
        if abs(a - b) <= _AGM_TOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def _check_modulus(k: float, open_top: bool = True) -> float:
    k = float(k)
    if not (0.0 < k < 1.0 or (k == 1.0 and not open_top)):
        raise DomainError(f"modulus k={k} is outside the supported range")
    return k


def complementary(k: float) -> float:
    """k' = sqrt(1 - k^2), computed without cancellation for k near 1."""
    return math.sqrt((1.0 - k) * (1.0 + k))


@dataclass(frozen=True)
class EllipticModulus:
    k: float
    k_prime: float
    K: float
    K_prime: float

    @classmethod
    def from_k(cls, k: float) -> "EllipticModulus":
        K, Kp = quarter_periods(k)
        return cls(float(k), complementary(k), K, Kp)


def quarter_periods(k: float) -> tuple[float, float]:
    """Return (K(k), K'(k)) for 0 < k < 1."""
    k = _check_modulus(k)
    kp = complementary(k)
    return math.pi / (2.0 * agm(1.0, kp)), math.pi / (2.0 * agm(1.0, k))


@lru_cache(maxsize=256)
def _landen_table(k: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    # a_n and c_n of the AGM started at (1, k'), c_0 = k
    a, b, c = 1.0, complementary(k), k
    As, Cs = [a], [c]
    for _ in range(_MAX_STEPS):
        if abs(c) <= _AGM_TOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        As.append(a)
        Cs.append(c)
    return tuple(As), tuple(Cs)


def amplitude(u, k: float):
    """Jacobi amplitude am(u, k), vectorised over ``u``."""
    u = np.asarray(u, dtype=float)
    if k == 0.0:
        return u.copy()
    if k == 1.0:
        return 2.0 * np.arctan(np.tanh(0.5 * u))
    As, Cs = _landen_table(k)
    N = len(As) - 1
    phi = (2.0**N) * As[N] * u
    for n in range(N, 0, -1):
        phi = 0.5 * (phi + np.arcsin(Cs[n] / As[n] * np.sin(phi)))
    return phi


def sn_cn_dn(u, k: float):
    """Return (sn, cn, dn) at ``u`` (scalar or array) for 0 <= k <= 1."""
    k = float(k)
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"modulus k={k} is outside [0, 1]")
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if k == 1.0:
        sn = np.tanh(u)
        cn = 1.0 / np.cosh(u)
        dn = cn.copy()
    else:
        phi = amplitude(u, k)
        sn, cn = np.sin(phi), np.cos(phi)
        kp = complementary(k)
        # dn^2 = cn^2 + k'^2 sn^2 is a sum of squares, so no cancellation near u = K
        dn = np.sqrt(cn * cn + (kp * sn) ** 2)
    if scalar:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


def inverse_amplitude(phi: float, k: float) -> float:
    """The unique u in [0, K] with am(u, k) = phi, for 0 <= phi <= pi/2.

    Bisection brackets the root, then Newton polishes it (``am' = dn >= k'``).
    """
    k = _check_modulus(k)
    target = min(max(float(phi), 0.0), 0.5 * math.pi)
    K = quarter_periods(k)[0]
    lo, hi = 0.0, K
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        if float(amplitude(mid, k)) < target:
            lo = mid
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    for _ in range(8):
        f = float(amplitude(u, k)) - target
        du = f / sn_cn_dn(u, k)[2]
        u = min(max(u - du, 0.0), K)
        if abs(du) <= 1e-17 * max(1.0, u):
            break
    return u


def inverse_dn(d: float, k: float) -> float:
    """The unique u in [0, K] with dn(u, k) = d, for k' <= d <= 1.

    The target amplitude is computed in closed form and handed to
    ``inverse_amplitude``. Near d = k' this is only half as accurate as d,
    since dn is flat at K.
    """
    k = _check_modulus(k)
    kp = complementary(k)
    d = float(d)
    slack = 1e-14
    if not (kp - slack <= d <= 1.0 + slack):
        raise DomainError(f"dn value {d} is outside [k', 1] = [{kp}, 1]")
    d = min(max(d, kp), 1.0)
    s = math.sqrt(max(0.0, (1.0 - d) * (1.0 + d))) / k
    c = math.sqrt(max(0.0, (d - kp) * (d + kp))) / k
    return inverse_amplitude(math.atan2(s, c), k)
