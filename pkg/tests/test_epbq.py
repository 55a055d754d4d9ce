import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from flexpoly import epbq
from flexpoly.epbq import (
    CurveCoeffs,
    EllipticFirst,
    EllipticSecond,
    Exotic,
    Rational,
    ScreenVerdict,
    TrivialLine,
    coeffs,
    fit_elliptic,
    realisable_screen,
    relation_residual,
)
from flexpoly.errors import (
    ContractViolation,
    FitError,
    NoCoefficientsError,
    NoRealModulusError,
    NotSingleFamilyError,
)


def scipy_coords(curve, u):
    """Curve coordinates computed with scipy.special.ellipj, as affine values or inf."""

    def jac(v):
        s, c, d, _ = special.ellipj(v, curve.k**2)
        return s, c, d

    def q(num, den):
        return num / den if den != 0 else math.inf

    if isinstance(curve, (EllipticFirst, EllipticSecond)):
        out = []
        for j, sig in enumerate(curve.sigma):
            s, c, d = jac(u - sig)
            first = j < curve.m_prime
            if isinstance(curve, EllipticFirst):
                out.append(d if first else q(c, s))
            else:
                out.append(c if first else q(d, curve.k * s))
        return out
    kp = math.sqrt(1 - curve.k**2)
    K = special.ellipk(curve.k**2)
    s, c, d = jac(u)
    s2, c2, d2 = jac(u - K / 2)
    if curve.alpha == 1:
        return [d, d2, d + kp / d]
    if curve.alpha == 2:
        return [d, -q(c2, s2), d - kp / d]
    return [q(c, s), q(c2, s2), q(c, s) - kp * q(s, c)]


def residual_affine(cf, z):
    worst = 0.0
    for j in range(cf.m):
        for l in range(cf.m):
            if j == l:
                continue
            zj, zl = z[j], z[l]
            r = cf.a[j, l] * zj**2 * zl**2 + cf.b[j, l] * zj**2 - 2 * zj * zl + cf.b[l, j] * zl**2 + cf.e[j, l]
            worst = max(worst, abs(r) / (1 + zj**2) / (1 + zl**2))
    return worst


CURVES = [
    EllipticFirst(0.6, (0.0, 0.4, 1.1), 3),
    EllipticFirst(0.6, (0.0, 0.4, 1.1), 0),
    EllipticFirst(0.85, (0.2, -0.7, 1.5, 2.6), 2),
    EllipticSecond(0.6, (0.0, 0.4, 1.1), 3),
    EllipticSecond(0.6, (0.0, 0.4, 1.1), 1),
    EllipticSecond(0.75, (0.3, 1.9, -0.8, 0.9), 2),
    Exotic(0.9, 1),
    Exotic(0.9, 2),
    Exotic(0.9, 3),
    Exotic(0.3, 2),
]


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: f"{c.family}-{getattr(c, 'm_prime', getattr(c, 'alpha', ''))}")
def test_coefficients_against_scipy_coordinates(curve):
    cf = coeffs(curve)
    rng = np.random.default_rng(3)
    for u in rng.uniform(-6, 6, 200):
        z = scipy_coords(curve, u)
        assert residual_affine(cf, z) < 1e-10


@pytest.mark.parametrize("curve", CURVES + [Rational((1.0, 3.0)), Rational((0.5, -2.0, 0.0, 7.0))], ids=str)
def test_homogenised_residual_including_poles(curve):
    cf = coeffs(curve)
    us = list(np.linspace(-7, 7, 301)) + epbq.poles(curve)
    worst = max(np.max(relation_residual(cf, epbq.eval(curve, u))) for u in us)
    assert worst < 1e-12


def test_rational_example_values():
    a, bjl, blj, e = coeffs(Rational((1.0, 3.0))).pair(0, 1)
    assert (a, bjl, blj, e) == (0.0, 1.5, 0.5, 2.0)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(0.05, 20), min_size=2, max_size=5, unique=True), st.lists(st.booleans(), min_size=5, max_size=5), st.floats(-50, 50))
def test_rational_relation_property(absmu, neg, x):
    mu = tuple(-v if s else v for v, s in zip(absmu, neg))
    if len({round(v, 6) for v in absmu}) < len(absmu):
        return
    c = Rational(mu)
    assert np.max(relation_residual(coeffs(c), epbq.eval(c, x))) < 1e-10


def test_eval_is_projective_and_finite():
    c = Rational((1.0, 3.0))
    z = epbq.eval(c, 0.0)
    assert np.all(np.isfinite(z))
    assert np.allclose(z, [[1, 0], [1, 0]])
    assert np.allclose(np.hypot(z[:, 0], z[:, 1]), 1)
    z = epbq.eval(EllipticFirst(0.6, (0.0, 0.5), 0), 0.0)
    assert z[0, 1] == 0.0


def test_exotic_alpha1_at_zero():
    kp = 0.28
    c = Exotic(math.sqrt(1 - kp * kp), 1)
    z = epbq.affine(epbq.eval(c, 0.0))
    assert np.allclose(z, [1.0, math.sqrt(kp), 1 + kp], atol=1e-12)
    cf = coeffs(c)
    assert cf.a[0, 2] == 0 and cf.b[0, 2] == 2.0 and cf.e[0, 2] == pytest.approx(2 * kp, abs=1e-15)


@pytest.mark.parametrize("alpha,sign", [(1, 1), (2, -1), (3, -1)])
def test_exotic_third_coordinate(alpha, sign):
    c = Exotic(0.8, alpha)
    kp = c.k_prime
    for u in np.linspace(0.1, 3.0, 17):
        z = epbq.affine(epbq.eval(c, u))
        assert abs(z[2] - (z[0] + sign * kp / z[0])) < 1e-10 * (1 + abs(z[2]))


def test_trivial_line_has_no_coefficients():
    with pytest.raises(NoCoefficientsError):
        coeffs(TrivialLine())


def test_contract_violations():
    with pytest.raises(ContractViolation):
        Rational((1.0, -1.0))
    with pytest.raises(ContractViolation):
        EllipticFirst(0.6, (0.0, 0.0), 2)
    K = epbq.ell.quarter_periods(0.6)[0]
    with pytest.raises(ContractViolation):
        EllipticFirst(0.6, (0.0, K), 2)
    with pytest.raises(ContractViolation):
        Exotic(0.6, 4)


def _single_pair(a, b1, b2, e):
    cf = CurveCoeffs.empty(2)
    cf.a[0, 1] = cf.a[1, 0] = a
    cf.b[0, 1], cf.b[1, 0] = b1, b2
    cf.e[0, 1] = cf.e[1, 0] = e
    return cf


def test_screen_examples():
    assert realisable_screen(_single_pair(1, -2, -2, 1))[(0, 1)] is ScreenVerdict.FAIL_SIGN_LEMMA
    assert realisable_screen(_single_pair(0.5, 0.5, 0.5, 0.5))[(0, 1)] is ScreenVerdict.FAIL_INEQUALITY
    for c in CURVES + [Rational((1.0, 3.0, -0.2))]:
        assert set(realisable_screen(coeffs(c)).values()) == {ScreenVerdict.PASS}


def test_kappa_of_first_kind_curve():
    c = EllipticFirst(0.6, (0.0, 0.4, 1.1), 3)
    kp2 = 0.64
    for j, l in [(0, 1), (0, 2), (1, 2)]:
        assert epbq.pair_kappa(*coeffs(c).pair(j, l)) == pytest.approx(kp2 + 1 / kp2, rel=1e-12)


def test_fit_recovers_modulus_and_phases():
    fit = fit_elliptic(coeffs(EllipticFirst(0.6, (0.0, 0.4, 1.1), 3)))
    assert abs(fit.k - 0.6) < 1e-10
    assert np.allclose(fit.sigma, [0, 0.4, 1.1], atol=1e-9)
    assert fit.k_prime**2 + fit.k_prime**-2 == pytest.approx(fit.kappa, rel=1e-12)


def test_fit_with_scaled_coordinates():
    cf = coeffs(EllipticFirst(0.7, (0.1, 0.9, -0.6), 3)).scaled([1.3, 0.6, 2.2])
    fit = fit_elliptic(cf)
    assert abs(fit.k - 0.7) < 1e-10
    assert np.allclose(fit.nu / fit.nu[0], np.array([1.3, 0.6, 2.2]) / 1.3, rtol=1e-9)


def test_fit_rational_branch():
    fit = fit_elliptic(coeffs(Rational((1.0, 3.0, -0.25))))
    assert fit.k == 1.0 and math.isinf(fit.kappa)
    assert np.allclose(fit.mu, [1.0, 3.0, -0.25])


def test_fit_errors():
    a = coeffs(EllipticFirst(0.6, (0.0, 0.4), 2))
    b = coeffs(EllipticFirst(0.8, (0.0, 0.7), 2))
    mixed = CurveCoeffs.empty(3)
    for X, Y, Z in ((mixed.a, a.a, b.a), (mixed.b, a.b, b.b), (mixed.e, a.e, b.e)):
        X[0, 1], X[1, 0] = Y[0, 1], Y[1, 0]
        X[0, 2], X[2, 0] = Z[0, 1], Z[1, 0]
        X[1, 2], X[2, 1] = Z[0, 1], Z[1, 0]
    with pytest.raises(NotSingleFamilyError):
        fit_elliptic(mixed)
    # kappa = 2 here
    with pytest.raises(NoRealModulusError):
        fit_elliptic(_single_pair(0.5, 0.5, 0.5, 0.5))
    # kappa = -3 needs an imaginary k'
    with pytest.raises(FitError):
        fit_elliptic(_single_pair(1.0, 1.0, 1.0, -1.0))


def test_json_round_trip():
    for c in CURVES + [Rational((1.0, 3.0)), TrivialLine()]:
        assert epbq.curve_from_json(epbq.curve_to_json(c)) == c
    cf = coeffs(CURVES[0])
    back = epbq.coeffs_from_json(epbq.coeffs_to_json(cf))
    assert np.allclose(back.b, cf.b, equal_nan=True)
    with pytest.raises(ContractViolation):
        epbq.curve_from_json({"family": "rational", "mu": [1, 2], "k": 0.5})
    with pytest.raises(ContractViolation):
        epbq.curve_from_json({"family": "nope"})
