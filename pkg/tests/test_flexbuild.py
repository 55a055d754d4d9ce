from dataclasses import replace

import numpy as np
import pytest

from flexpoly import epbq
from flexpoly.butterfly import Verdict
from flexpoly.errors import NotRealisableHereError, SpecError
from flexpoly.flexbuild import (
    Decomposition,
    FlexSpec,
    assemble_gh,
    biquad_from_gh,
    build,
    e_matrix,
    edge_lengths,
    frame_at,
    gh_from_biquad,
    sample_grid,
    verify,
)
from flexpoly.witnesses import exotic_witness, rational_witness, simplest_witness


def test_decomposition_validation():
    assert Decomposition.from_type((2, 1)).blocks == ((0, 1), (2,))
    with pytest.raises(SpecError):
        Decomposition(3, ((0, 1), (1, 2)))
    with pytest.raises(SpecError):
        Decomposition(3, ((0,), (1,)))


def test_spec_errors():
    dec = Decomposition.from_type((1, 1, 1))
    cur = epbq.Rational((1.0, 2.0, 3.0))
    with pytest.raises(SpecError):
        assemble_gh(FlexSpec(cur, dec, (1.0, 2.0)))
    with pytest.raises(SpecError):
        assemble_gh(FlexSpec(cur, dec, (1.0, 0.0, 2.0)))
    with pytest.raises(SpecError):
        assemble_gh(FlexSpec(epbq.Rational((1.0, 2.0)), dec, (1.0, 2.0, 3.0)))
    dec2 = Decomposition.from_type((2, 1))
    with pytest.raises(SpecError):
        assemble_gh(FlexSpec(epbq.Rational((1.0, 2.0)), dec2, (1.0, 2.0, 3.0)))
    with pytest.raises(SpecError):
        assemble_gh(FlexSpec(epbq.Rational((1.0, 2.0)), dec2, (1.0, -1.0, 3.0), {(0, 1): 0.0}))
    with pytest.raises(SpecError):
        assemble_gh(FlexSpec(epbq.TrivialLine(), Decomposition.from_type((2,)), (1.0, 2.0), {(0, 1): 0.1}))


def test_cross_block_coefficients_follow_the_curve():
    spec = rational_witness("spherical", (2, 1))
    pair, bq = assemble_gh(spec)
    cf = epbq.coeffs(spec.curve)
    jb = spec.decomp.block_of()
    lam = spec.lam
    for p in range(3):
        for q in range(3):
            if p == q or jb[p] == jb[q]:
                continue
            j, l = jb[p], jb[q]
            assert bq.A[p, q] == pytest.approx(cf.a[j, l] / (lam[p] * lam[q]), abs=1e-12)
            assert bq.B[p, q] == pytest.approx(lam[q] * cf.b[j, l] / lam[p], rel=1e-12)
            assert bq.E[p, q] == pytest.approx(lam[p] * lam[q] * cf.e[j, l], rel=1e-12)
    # within-block pair: E = 0 and the proportionality values of h
    assert bq.E[0, 1] == 0
    lp, lq = lam[0], lam[1]
    g = pair.G[0, 1]
    r = lq / lp
    assert pair.H[0, 1] == pytest.approx(2 * (g - r) / (1 - r * r), rel=1e-12)
    assert pair.H[1, 0] == pytest.approx(2 * (g - 1 / r) / (1 - 1 / r**2), rel=1e-12)


def test_gh_biquad_round_trip():
    spec = exotic_witness("spherical", (1, 1, 1), 0.02, 2)
    pair, bq = assemble_gh(spec)
    back = gh_from_biquad(bq)
    assert np.max(np.abs(back.G - pair.G)) < 1e-12 and np.max(np.abs(back.H - pair.H)) < 1e-12
    again = biquad_from_gh(back, np.nan_to_num(bq.E))
    assert np.allclose(again.A, bq.A, equal_nan=True, atol=1e-12)


@pytest.mark.parametrize(
    "spec",
    [
        simplest_witness("euclidean", 3),
        rational_witness("spherical", (1, 1, 1)),
        rational_witness("hyperbolic", (1, 1, 1)),
    ],
    ids=["simplest-E", "rational-S", "rational-L"],
)
def test_verify_passes_on_witnesses(spec):
    poly = build(spec)
    report = verify(poly, 60)
    assert report.passed, report.checks


def test_perturbed_lambda_breaks_flexion():
    poly = build(rational_witness("spherical", (1, 1, 1)))
    lam = list(poly.spec.lam)
    lam[1] *= 1.01
    bad = replace(poly, spec=replace(poly.spec, lam=tuple(lam)))
    report = verify(bad, 40)
    assert not report.checks["bb_lengths"]


def test_forced_space_mismatch():
    spec = replace(exotic_witness("spherical", (1, 1, 1)), space="euclidean")
    with pytest.raises(NotRealisableHereError, match="Gram identity"):
        build(spec)
    spec = replace(rational_witness("euclidean", (1, 1, 1)), space="spherical")
    with pytest.raises(NotRealisableHereError):
        build(spec)


def test_frame_and_e_matrix():
    poly = build(rational_witness("spherical", (2, 2)))
    assert poly.classification.verdict is Verdict.SPHERICAL
    for u in (-3.0, 0.0, 0.4, 17.0):
        fr = frame_at(poly, u)
        E = e_matrix(poly, fr)
        mask = ~np.isnan(poly.biquad.E)
        assert np.max(np.abs(E[mask] - poly.biquad.E[mask])) < 1e-10
        assert np.all((fr.phi > -np.pi) & (fr.phi <= np.pi))
    L = edge_lengths(frame_at(poly, 0.3))
    assert np.isnan(L.ab[0, 0]) and not np.isnan(L.ab[0, 1])


def test_sample_grid_hits_poles_once():
    c = epbq.EllipticFirst(0.7, (0.0, 0.5, 1.3), 1)
    grid = sample_grid(c, 200)
    assert len(grid) == 200
    poles = epbq.poles(c)
    hits = sum(1 for u in grid if any(abs(u - p) == 0 for p in poles))
    assert hits == 1
    others = [u for u in grid if all(u != p for p in poles)]
    P = epbq.period(c)
    for u in others:
        for p in poles:
            assert abs(np.remainder(u - p + P / 2, P) - P / 2) >= 1e-6
    r = sample_grid(epbq.Rational((1.0, 2.0)), 200)
    assert len(r) == 200 and 0.0 in r and r.max() == 100.0 and r.min() == -100.0
