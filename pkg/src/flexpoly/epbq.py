"""Curves whose coordinates pairwise satisfy even-biquadratic relations.

A relation between two projective coordinates z_j, z_l has the shape

    a z_j^2 z_l^2 + b_jl z_j^2 + b_lj z_l^2 - 2 z_j z_l + e = 0.

Every curve below is a real parametrisation (z_1(u), ..., z_m(u)) of such a
system. Values are returned as unit pairs (s, c) standing for z = s / c, so
poles are ordinary points (c = 0) rather than infinities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from . import elliptic as ell
from .errors import (
    ContractViolation,
    FitError,
    NoCoefficientsError,
    NoRealModulusError,
    NotSingleFamilyError,
)

# |sigma_j - sigma_l| must stay this far from multiples of K
SIGMA_SEPARATION = 1e-9


def proj(num, den) -> np.ndarray:
    """Normalise (num, den) to a unit pair with c > 0, or c == 0 and s > 0."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    r = np.hypot(num, den)
    if np.any(r == 0):
        raise ContractViolation("projective value 0/0")
    s, c = num / r, den / r
    flip = (c < 0) | ((c == 0) & (s < 0))
    s = np.where(flip, -s, s)
    c = np.where(flip, -c, c)
    return np.stack([s, c], axis=-1)


def affine(pairs) -> np.ndarray:
    """Affine value s / c with +inf at poles."""
    pairs = np.asarray(pairs, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(pairs[..., 1] == 0, np.inf, pairs[..., 0] / pairs[..., 1])


# ----------------------------------------------------------------- curves


@dataclass(frozen=True)
class TrivialLine:
    """The single coordinate z(x) = x."""

    family = "line"

    @property
    def m(self) -> int:
        return 1


@dataclass(frozen=True)
class Rational:
    """z_j(x) = x + mu_j / x with pairwise distinct |mu_j|."""

    mu: tuple[float, ...]
    family = "rational"

    def __post_init__(self):
        mu = tuple(float(v) for v in self.mu)
        object.__setattr__(self, "mu", mu)
        if len(mu) < 2:
            raise ContractViolation("a rational curve needs at least two coordinates")
        absmu = [abs(v) for v in mu]
        for i, j in combinations(range(len(mu)), 2):
            if math.isclose(absmu[i], absmu[j], rel_tol=1e-12, abs_tol=1e-300):
                raise ContractViolation(f"|mu| values must be distinct (indices {i}, {j})")

    @property
    def m(self) -> int:
        return len(self.mu)


@dataclass(frozen=True)
class _EllipticBase:
    k: float
    sigma: tuple[float, ...]
    m_prime: int

    def __post_init__(self):
        sigma = tuple(float(v) for v in self.sigma)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "m_prime", int(self.m_prime))
        if not 0.0 < self.k < 1.0:
            raise ContractViolation(f"modulus k={self.k} must lie in (0, 1)")
        if len(sigma) < 2:
            raise ContractViolation("an elliptic curve needs at least two coordinates")
        if not 0 <= self.m_prime <= len(sigma):
            raise ContractViolation(f"m_prime={self.m_prime} must lie in [0, {len(sigma)}]")
        K = ell.quarter_periods(self.k)[0]
        for i, j in combinations(range(len(sigma)), 2):
            r = math.remainder(sigma[i] - sigma[j], K)
            if abs(r) < SIGMA_SEPARATION * max(1.0, K):
                raise ContractViolation(f"sigma_{i} and sigma_{j} coincide modulo K")

    @property
    def m(self) -> int:
        return len(self.sigma)

    def signs(self) -> list[int]:
        return [1 if j < self.m_prime else -1 for j in range(self.m)]


@dataclass(frozen=True)
class EllipticFirst(_EllipticBase):
    """dn(u - sigma_j) for the first m' coordinates, cn/sn(u - sigma_j) after."""

    family = "elliptic1"


@dataclass(frozen=True)
class EllipticSecond(_EllipticBase):
    """cn(u - sigma_j) for the first m' coordinates, dn/(k sn)(u - sigma_j) after."""

    family = "elliptic2"


@dataclass(frozen=True)
class Exotic:
    """Three coordinates built from one modulus; alpha in {1, 2, 3} picks the variant."""

    k: float
    alpha: int
    family = "exotic"

    def __post_init__(self):
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "alpha", int(self.alpha))
        if not 0.0 < self.k < 1.0:
            raise ContractViolation(f"modulus k={self.k} must lie in (0, 1)")
        if self.alpha not in (1, 2, 3):
            raise ContractViolation(f"alpha must be 1, 2 or 3, got {self.alpha}")

    @property
    def m(self) -> int:
        return 3

    @property
    def k_prime(self) -> float:
        return ell.complementary(self.k)

    def eps(self) -> tuple[int, int]:
        return {1: (1, 1), 2: (-1, 1), 3: (1, -1)}[self.alpha]


EpbqCurve = TrivialLine | Rational | EllipticFirst | EllipticSecond | Exotic


def is_elliptic(curve) -> bool:
    return isinstance(curve, (EllipticFirst, EllipticSecond, Exotic))


def period(curve) -> float:
    """Real period of the parameter for elliptic curves (4K), inf otherwise."""
    if is_elliptic(curve):
        return 4.0 * ell.quarter_periods(curve.k)[0]
    return math.inf


def poles(curve) -> list[float]:
    """Parameter values in one period where some coordinate is infinite."""
    if isinstance(curve, Rational):
        return [0.0] if any(mu != 0 for mu in curve.mu) else []
    if isinstance(curve, TrivialLine):
        return []
    P = period(curve)
    K = P / 4
    out = []
    if isinstance(curve, (EllipticFirst, EllipticSecond)):
        for j, s in enumerate(curve.sigma):
            if j >= curve.m_prime:
                # kept unreduced so that u - sigma_j is exactly 0 or 2K
                out += [s, s + 2 * K]
    elif isinstance(curve, Exotic):
        if curve.alpha == 1:
            return []
        # cn/sn(u - K/2) has poles at K/2 mod 2K
        out += [(0.5 * K) % P, (2.5 * K) % P]
        if curve.alpha == 3:
            out += [0.0, 2 * K, K, 3 * K]
    return sorted(set(out))


def eval(curve, u) -> np.ndarray:
    """Coordinates at parameter ``u`` as an (m, 2) array of unit pairs."""
    u = float(u)
    if isinstance(curve, TrivialLine):
        return proj([u], [1.0])
    if isinstance(curve, Rational):
        mu = np.array(curve.mu)
        num = u * u + mu
        den = np.full_like(mu, u)
        # mu = 0 makes z = x, which must not collapse to 0/0 at x = 0
        zero = mu == 0
        num = np.where(zero, u, num)
        den = np.where(zero, 1.0, den)
        return proj(num, den)
    if isinstance(curve, (EllipticFirst, EllipticSecond)):
        k = curve.k
        v = u - np.array(curve.sigma)
        sn, cn, dn = ell.sn_cn_dn(v, k)
        first = np.arange(curve.m) < curve.m_prime
        if isinstance(curve, EllipticFirst):
            num = np.where(first, dn, cn)
            den = np.where(first, 1.0, sn)
        else:
            num = np.where(first, cn, dn)
            den = np.where(first, 1.0, k * sn)
        return proj(num, den)
    if isinstance(curve, Exotic):
        k, kp = curve.k, curve.k_prime
        K = ell.quarter_periods(k)[0]
        sn, cn, dn = ell.sn_cn_dn(u, k)
        sh, ch, dh = ell.sn_cn_dn(u - 0.5 * K, k)
        if curve.alpha == 1:
            rows = [(dn, 1.0), (dh, 1.0), (dn * dn + kp, dn)]
        elif curve.alpha == 2:
            # the coefficient table for this variant needs the reflected phase K/2 - u
            rows = [(dn, 1.0), (ch, -sh), (dn * dn - kp, dn)]
        else:
            rows = [(cn, sn), (ch, sh), (cn * cn - kp * sn * sn, sn * cn)]
        num, den = zip(*rows)
        return proj(np.array(num), np.array(den))
    raise ContractViolation(f"unknown curve type {type(curve).__name__}")


# ----------------------------------------------------------- coefficients


@dataclass
class CurveCoeffs:
    """Pairwise coefficients; a and e are symmetric, b is not. Diagonals are NaN."""

    m: int
    a: np.ndarray
    b: np.ndarray
    e: np.ndarray

    @classmethod
    def empty(cls, m: int) -> "CurveCoeffs":
        def blank():
            x = np.zeros((m, m))
            np.fill_diagonal(x, np.nan)
            return x

        return cls(m, blank(), blank(), blank())

    def pair(self, j: int, l: int) -> tuple[float, float, float, float]:
        return self.a[j, l], self.b[j, l], self.b[l, j], self.e[j, l]

    def scaled(self, nu) -> "CurveCoeffs":
        """Coefficients after z_j -> nu_j z_j."""
        nu = np.asarray(nu, dtype=float)
        out = CurveCoeffs.empty(self.m)
        for j, l in _pairs(self.m):
            out.a[j, l] = self.a[j, l] / (nu[j] * nu[l])
            out.b[j, l] = self.b[j, l] * nu[l] / nu[j]
            out.e[j, l] = self.e[j, l] * nu[j] * nu[l]
        return out


def _pairs(m: int):
    return ((j, l) for j in range(m) for l in range(m) if j != l)


def _elliptic_pair(curve, j: int, l: int) -> tuple[float, float, float]:
    """(a_jl, b_jl, e_jl) for an elliptic curve of the first or second kind."""
    k = curve.k
    kp2 = (1.0 - k) * (1.0 + k)
    sn, cn, dn = ell.sn_cn_dn(curve.sigma[j] - curve.sigma[l], k)
    eps = curve.signs()
    ej, el = eps[j], eps[l]
    if isinstance(curve, EllipticFirst):
        if ej == el:
            return ej * sn * sn / dn, cn * cn / dn, ej * kp2 * sn * sn / dn
        den = k * k * sn * cn
        return ej / den, dn * dn / den, -ej * kp2 / den
    if ej == el:
        return ej * k * k * sn * sn / cn, dn * dn / cn, -ej * kp2 * sn * sn / cn
    den = sn * dn
    return ej * k / den, k * cn * cn / den, ej * kp2 / (k * den)


def _exotic_coeffs(curve: Exotic) -> CurveCoeffs:
    kp = curve.k_prime
    e1, e2 = curve.eps()
    r = math.sqrt(kp)
    q = 1.0 + e1 * kp
    out = CurveCoeffs.empty(3)
    A = e2 / (r * q)
    out.a[0, 1] = out.a[1, 0] = A
    out.a[1, 2] = out.a[2, 1] = A
    out.a[0, 2] = out.a[2, 0] = 0.0
    out.b[0, 1] = r / q
    out.b[0, 2] = 2.0
    out.b[1, 0] = e1 * r / q
    out.b[1, 2] = 0.0
    out.b[2, 0] = 0.0
    out.b[2, 1] = r / q
    E = e1 * e2
    out.e[0, 1] = out.e[1, 0] = E * kp * r / q
    out.e[0, 2] = out.e[2, 0] = E * 2.0 * kp
    out.e[1, 2] = out.e[2, 1] = 0.0
    return out


def coeffs(curve) -> CurveCoeffs:
    """Pairwise coefficients (a, b, e) satisfied by the coordinates of ``curve``."""
    if isinstance(curve, TrivialLine):
        raise NoCoefficientsError("the trivial line has a single coordinate")
    if isinstance(curve, Exotic):
        return _exotic_coeffs(curve)
    out = CurveCoeffs.empty(curve.m)
    for j, l in _pairs(curve.m):
        if isinstance(curve, Rational):
            mj, ml = curve.mu[j], curve.mu[l]
            a, b, e = 0.0, 2.0 * ml / (mj + ml), 2.0 * (mj - ml) ** 2 / (mj + ml)
        else:
            a, b, e = _elliptic_pair(curve, j, l)
        out.a[j, l], out.b[j, l], out.e[j, l] = a, b, e
    # a and e are symmetric in exact arithmetic; make them bitwise symmetric
    for j, l in combinations(range(curve.m), 2):
        out.a[l, j] = out.a[j, l]
        out.e[l, j] = out.e[j, l]
    return out


def relation_residual(cf: CurveCoeffs, z) -> np.ndarray:
    """Homogenised residual of every pairwise relation at the unit pairs ``z`` (shape (m, 2))."""
    z = np.asarray(z, dtype=float)
    if z.shape != (cf.m, 2):
        raise ContractViolation(f"expected {cf.m} projective values, got shape {z.shape}")
    s, c = z[:, 0], z[:, 1]
    out = np.zeros((cf.m, cf.m))
    for j, l in _pairs(cf.m):
        out[j, l] = abs(
            cf.a[j, l] * s[j] ** 2 * s[l] ** 2
            + cf.b[j, l] * s[j] ** 2 * c[l] ** 2
            - 2.0 * s[j] * c[j] * s[l] * c[l]
            + cf.b[l, j] * c[j] ** 2 * s[l] ** 2
            + cf.e[j, l] * c[j] ** 2 * c[l] ** 2
        )
    return out


# ---------------------------------------------------------------- screens


class ScreenVerdict(str, Enum):
    PASS = "pass"
    FAIL_INEQUALITY = "fail_inequality"
    FAIL_SIGN_LEMMA = "fail_sign_lemma"


def quartic_discriminant(a: float, bjl: float, blj: float, e: float) -> float:
    """(1 - ae - b_jl b_lj)^2 - 4 a b_jl b_lj e; positive on realisable pairs."""
    return (1.0 - a * e - bjl * blj) ** 2 - 4.0 * a * bjl * blj * e


def sign_lemma_violated(a: float, bjl: float, blj: float, e: float) -> bool:
    """a, -b_jl, -b_lj, e share a strict sign and a e >= 1 or b_jl b_lj >= 1: no real curve fits."""
    vals = np.array([a, -bjl, -blj, e])
    same_sign = bool(np.all(vals > 0) or np.all(vals < 0))
    return same_sign and (a * e >= 1.0 or bjl * blj >= 1.0)


def realisable_screen(cf: CurveCoeffs) -> dict[tuple[int, int], ScreenVerdict]:
    """Per unordered pair: the sign condition is tested first, then the discriminant."""
    out = {}
    for j, l in combinations(range(cf.m), 2):
        p = cf.pair(j, l)
        if sign_lemma_violated(*p):
            out[(j, l)] = ScreenVerdict.FAIL_SIGN_LEMMA
        elif quartic_discriminant(*p) <= 0:
            out[(j, l)] = ScreenVerdict.FAIL_INEQUALITY
        else:
            out[(j, l)] = ScreenVerdict.PASS
    return out


# -------------------------------------------------------------- elliptic fit


@dataclass
class EllipticFit:
    kappa: float
    k: float
    k_prime: float
    nu: np.ndarray
    sigma: np.ndarray
    mu: np.ndarray | None = None
    pattern: str = "elliptic"
    residual: float = 0.0
    extra: dict = field(default_factory=dict)


def pair_kappa(a: float, bjl: float, blj: float, e: float) -> float:
    """Modulus invariant k'^2 + 1/k'^2 of one pair; inf if a b b e = 0."""
    P = a * bjl * blj * e
    if P == 0:
        return math.inf
    return ((1.0 - a * e - bjl * blj) ** 2 - 2.0 * P) / P


def _fit_rational(cf: CurveCoeffs, tol: float) -> EllipticFit:
    # a == 0 everywhere gives x + mu/x; e == 0 everywhere is the same after z -> 1/z
    m = cf.m
    offdiag = ~np.eye(m, dtype=bool)
    amax = np.max(np.abs(cf.a[offdiag]))
    emax = np.max(np.abs(cf.e[offdiag]))
    if amax == 0:
        pattern, b, e = "rational", cf.b, cf.e
    elif emax == 0:
        pattern, b, e = "rational_inverted", cf.b.T, cf.a
    else:
        raise FitError("degenerate invariant without a vanishing a- or e-pattern")
    mu = np.empty(m)
    mu[0] = 1.0
    for l in range(1, m):
        if b[l, 0] == 0:
            raise FitError("cannot fix the ratio mu_l / mu_1")
        mu[l] = b[0, l] / b[l, 0]
    r = mu[1]
    if r == 1.0:
        raise FitError("coincident mu values")
    mu *= e[0, 1] * (1.0 + r) / (2.0 * (1.0 - r) ** 2)
    regen = coeffs(Rational(tuple(mu)))
    if pattern == "rational_inverted":
        regen = CurveCoeffs(m, regen.e, regen.b.T.copy(), regen.a)
    res = _coeff_distance(regen, cf)
    if res > tol:
        raise FitError(f"regenerated rational coefficients differ by {res:.3e}")
    return EllipticFit(math.inf, 1.0, 0.0, np.ones(m), 0.5 * np.log(np.abs(mu)), mu, pattern, res)


def _coeff_distance(x: CurveCoeffs, y: CurveCoeffs) -> float:
    worst = 0.0
    for j, l in _pairs(x.m):
        for u, v in ((x.a[j, l], y.a[j, l]), (x.b[j, l], y.b[j, l]), (x.e[j, l], y.e[j, l])):
            worst = max(worst, abs(u - v) / max(1.0, abs(v)))
    return worst


def fit_elliptic(cf: CurveCoeffs, tol: float = 1e-8) -> EllipticFit:
    """Recover (k, nu, sigma) of a dn-type first-kind curve from its coefficients.

    The dn-form is ``z_j = nu_j dn(u - sigma_j)``. The phase of the first
    coordinate and the sign of the second are fixed to 0 and +, since the
    coefficients are invariant under translation and reflection of u.
    """
    m = cf.m
    if m < 2:
        raise ContractViolation("need at least two coordinates")
    kappas = {(j, l): pair_kappa(*cf.pair(j, l)) for j, l in combinations(range(m), 2)}
    if all(math.isinf(v) for v in kappas.values()):
        return _fit_rational(cf, tol)
    if any(math.isinf(v) for v in kappas.values()):
        raise NotSingleFamilyError("some pairs are degenerate and others are not")
    kappa = kappas[(0, 1)]
    for pair, v in kappas.items():
        if abs(v - kappa) > 1e-8 * max(1.0, abs(kappa)):
            raise NotSingleFamilyError(f"pair {pair} gives invariant {v}, pair (0, 1) gives {kappa}")
    if -2.0 < kappa <= 2.0:
        raise NoRealModulusError(f"invariant {kappa} admits no real modulus")
    if kappa <= -2.0:
        raise FitError(f"invariant {kappa} needs an imaginary complementary modulus")
    # smaller root of x^2 - kappa x + 1 = 0, written to avoid cancellation
    kp2 = 2.0 / (kappa + math.sqrt((kappa - 2.0) * (kappa + 2.0)))
    kp = math.sqrt(kp2)
    k = ell.complementary(kp)

    nu = np.empty(m)
    for j in range(m):
        l = 1 if j == 0 else 0
        a, bjl, blj, e = cf.pair(j, l)
        val = (1.0 - a * e - bjl * blj) / ((1.0 + kp2) * a * bjl)
        if not val > 0:
            raise FitError(f"scale of coordinate {j} is not real")
        nu[j] = math.sqrt(val)

    # For a dn pair at phase difference v: a e = k'^2 sn^4 / dn^2 and
    # b_jl b_lj = cn^4 / dn^2, both unchanged by rescaling. Their ratio gives
    # the amplitude of |v| folded into [0, K], which stays well conditioned at K.
    def amp_of(j: int, l: int) -> float:
        a, bjl, blj, e = cf.pair(j, l)
        sn2 = math.sqrt(abs(a * e)) / kp
        cn2 = math.sqrt(abs(bjl * blj))
        return math.atan2(math.sqrt(sn2), math.sqrt(cn2))

    def amp_at(v: float) -> float:
        sn, cn, _ = ell.sn_cn_dn(v, k)
        return math.atan2(abs(sn), abs(cn))

    try:
        base = [0.0] + [ell.inverse_amplitude(amp_of(0, l), k) for l in range(1, m)]
    except Exception as exc:
        raise FitError(f"phase recovery failed: {exc}") from exc
    sigma = np.array(base)
    K = ell.quarter_periods(k)[0]
    for l in range(2, m):
        # choose the sign of sigma_l that matches the (1, l) pair data
        target = amp_of(1, l)
        cands = [base[l], -base[l]]
        errs = [abs(amp_at(sigma[1] - c) - target) for c in cands]
        sigma[l] = cands[int(np.argmin(errs))]
    try:
        regen = coeffs(EllipticFirst(k, tuple(sigma), m)).scaled(nu)
    except ContractViolation as exc:
        raise FitError(str(exc)) from exc
    res = _coeff_distance(regen, cf)
    if res > tol:
        raise FitError(f"regenerated coefficients differ by {res:.3e}")
    return EllipticFit(kappa, k, kp, nu, sigma, None, "elliptic", res, {"K": K})


# ------------------------------------------------------------------- JSON


def curve_to_json(curve) -> dict:
    if isinstance(curve, TrivialLine):
        return {"family": "line"}
    if isinstance(curve, Rational):
        return {"family": "rational", "mu": list(curve.mu)}
    if isinstance(curve, (EllipticFirst, EllipticSecond)):
        return {"family": curve.family, "k": curve.k, "sigma": list(curve.sigma), "m_prime": curve.m_prime}
    if isinstance(curve, Exotic):
        return {"family": "exotic", "k": curve.k, "alpha": curve.alpha}
    raise ContractViolation(f"unknown curve type {type(curve).__name__}")


_FIELDS = {
    "line": set(),
    "rational": {"mu"},
    "elliptic1": {"k", "sigma", "m_prime"},
    "elliptic2": {"k", "sigma", "m_prime"},
    "exotic": {"k", "alpha"},
}


def curve_from_json(obj: dict):
    """Parse a curve description. Raises ``ContractViolation`` on bad input."""
    if not isinstance(obj, dict) or "family" not in obj:
        raise ContractViolation("curve must be an object with a 'family' field")
    fam = obj["family"]
    if fam not in _FIELDS:
        raise ContractViolation(f"unknown curve family {fam!r}")
    keys = set(obj) - {"family"}
    if keys != _FIELDS[fam]:
        raise ContractViolation(
            f"curve family {fam!r} takes fields {sorted(_FIELDS[fam])}, got {sorted(keys)}"
        )
    try:
        if fam == "line":
            return TrivialLine()
        if fam == "rational":
            return Rational(tuple(obj["mu"]))
        if fam == "exotic":
            return Exotic(obj["k"], obj["alpha"])
        cls = EllipticFirst if fam == "elliptic1" else EllipticSecond
        return cls(obj["k"], tuple(obj["sigma"]), obj["m_prime"])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ContractViolation):
            raise
        raise ContractViolation(f"bad value in curve {fam!r}: {exc}") from exc


def coeffs_to_json(cf: CurveCoeffs) -> dict:
    def mat(x):
        return [[None if j == l else float(x[j, l]) for l in range(cf.m)] for j in range(cf.m)]

    return {"m": cf.m, "a": mat(cf.a), "b": mat(cf.b), "e": mat(cf.e)}


def coeffs_from_json(obj: dict) -> CurveCoeffs:
    try:
        m = int(obj["m"])
        out = CurveCoeffs.empty(m)
        for name in ("a", "b", "e"):
            rows = obj[name]
            if len(rows) != m or any(len(r) != m for r in rows):
                raise ContractViolation(f"coefficient matrix {name!r} must be {m}x{m}")
            for j, l in _pairs(m):
                getattr(out, name)[j, l] = float(rows[j][l])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ContractViolation):
            raise
        raise ContractViolation(f"malformed coefficient object: {exc}") from exc
    return out
