"""Explicit parameter points at which each family is realisable, and family dimensions.

Spherical points are built directly with near-identity Gram matrices.
Euclidean points are reached by moving one coordinate of a spherical point
until det G first vanishes (bracketed root, polished with Brent's method).
Hyperbolic points step slightly past that crossing.
"""

from __future__ import annotations

import math
from dataclasses import replace
from itertools import combinations

import numpy as np
from scipy.optimize import brentq

from . import epbq
from .butterfly import Verdict, classify
from .errors import NotRealisableHereError, SpecError, WitnessError
from .flexbuild import Decomposition, FlexSpec, assemble_gh
from .geometry import SpaceKind

FAMILIES = ("simplest", "rational", "elliptic1", "elliptic2", "exotic")
_SCAN = 600


def family_dimension(family: str, sizes) -> int:
    """Number of real parameters of a family of the given block type."""
    sizes = tuple(int(s) for s in sizes)
    n, m = sum(sizes), len(sizes)
    pairs = sum(s * (s - 1) // 2 for s in sizes)
    if family == "simplest":
        return n * (n + 1) // 2
    if family == "rational":
        return m + n + pairs
    if family in ("elliptic1", "elliptic2"):
        return 1 + m + n + pairs
    if family == "exotic":
        if m != 3:
            raise SpecError("exotic families have exactly three blocks")
        return 4 + pairs
    raise SpecError(f"unknown family {family!r}")


def _block_scales(dec: Decomposition, base) -> tuple[float, ...]:
    """lambda_p = base_j * (1 + 0.35 r) for the r-th member of block j, so |lambda| differ inside blocks."""
    lam = [0.0] * dec.n
    for j, block in enumerate(dec.blocks):
        for r, p in enumerate(block):
            lam[p] = base[j] * (1.0 + 0.35 * r)
    return tuple(lam)


def _zero_within(dec: Decomposition) -> dict:
    return {pq: 0.0 for pq in dec.within_pairs()}


def rational_point(sizes, delta: float, signs=None):
    """The near-identity rational point mu_j = eps_j delta^(2j), lambda ~ delta^(m-j)."""
    dec = Decomposition.from_type(sizes)
    m = dec.m
    signs = [1] * m if signs is None else list(signs)
    mu = tuple(signs[j] * delta ** (2 * (j + 1)) for j in range(m))
    base = [delta ** (m - j - 1) for j in range(m)]
    return FlexSpec(epbq.Rational(mu), dec, _block_scales(dec, base), _zero_within(dec))


def rational_lambda_bounds(n: int, delta: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """(lambda+, lambda-) for the all-singleton rational type: near identity and det G < 0."""
    plus = tuple(delta ** (n - p) for p in range(1, n + 1))
    minus = (2.0 * delta ** (n - 2),) + plus[1:]
    return plus, minus


def _det(spec: FlexSpec) -> float:
    return float(np.linalg.det(assemble_gh(spec)[0].G))


def _first_crossing(path, lo: float = 0.0, hi: float = 1.0):
    """Smallest theta in [lo, hi] with det G(path(theta)) = 0, or None."""
    thetas = np.linspace(lo, hi, _SCAN + 1)
    if _det(path(thetas[0])) <= 0:
        return None
    for a, b in zip(thetas[:-1], thetas[1:]):
        try:
            cur = _det(path(b))
        except SpecError:
            return None
        if cur <= 0:
            return brentq(lambda th: _det(path(th)), a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)
    return None


def _cross_to(space: SpaceKind, path, hi: float = 1.0) -> FlexSpec:
    root = _first_crossing(path, 0.0, hi)
    if root is None:
        raise WitnessError("no determinant crossing along the path")
    if space is SpaceKind.EUCLIDEAN:
        spec = path(root)
        cls = classify(assemble_gh(spec)[0])
        if cls.verdict is not Verdict.EUCLIDEAN:
            raise WitnessError(f"crossing point classified as {cls.verdict.value}: {cls.violated}")
        return spec
    step = 1e-3 * hi
    for _ in range(40):
        spec = path(root + step)
        cls = classify(assemble_gh(spec)[0])
        if cls.verdict is Verdict.HYPERBOLIC:
            return spec
        step *= 0.5
    raise WitnessError("no hyperbolic point found just past the crossing")


def _paths(spec: FlexSpec):
    """One-parameter deformations of a spherical point, tried in order."""
    dec = spec.decomp
    within = dec.within_pairs()
    if within:
        key = within[0]
        for sign in (1.0, -1.0):

            def path(th, key=key, sign=sign):
                gw = dict(spec.g_within)
                gw[key] = sign * th * (1.0 - 1e-12)
                return replace(spec, g_within=gw)

            yield path
    for p in range(dec.n):
        for factor in (20.0, 1.0 / 20.0):

            def path(th, p=p, factor=factor):
                lam = list(spec.lam)
                lam[p] = lam[p] * factor**th
                return replace(spec, lam=tuple(lam))

            yield path


def _deform(space: SpaceKind, spec: FlexSpec) -> FlexSpec:
    for path in _paths(spec):
        try:
            return _cross_to(space, path)
        except WitnessError:
            continue
    raise WitnessError(f"no {space.value} point found near the spherical witness")


def _require(spec: FlexSpec, space: SpaceKind) -> FlexSpec:
    cls = classify(assemble_gh(spec)[0])
    if cls.kind is not space:
        raise WitnessError(f"witness classified as {cls.verdict.value} ({cls.violated}), expected {space.value}")
    return replace(spec, space=space.value)


def simplest_witness(space, n: int, eta: float = 0.05, seed: int = 0) -> FlexSpec:
    """Single-block family t_p = lambda_p x.

    G0 is the Gram matrix of n random unit vectors in R^(n-1), so it is
    singular. Scaling its off-diagonal part by (1 + eta) pushes the null
    eigenvalue to -eta: eta < 0 is spherical, eta = 0 euclidean, eta > 0
    hyperbolic.
    """
    space = SpaceKind(space)
    rng = np.random.default_rng(seed)
    V = rng.normal(size=(n, n - 1))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    G0 = V @ V.T
    sign = {SpaceKind.SPHERICAL: -1.0, SpaceKind.EUCLIDEAN: 0.0, SpaceKind.HYPERBOLIC: 1.0}[space]
    dec = Decomposition(n, (tuple(range(n)),))
    lam = tuple(1.0 + 0.5 * p for p in range(n))
    eta = abs(eta)
    # a proper minor can vanish before eta does, so shrink eta until the kind is right
    for _ in range(30):
        G = np.eye(n) + (1.0 + sign * eta) * (G0 - np.eye(n))
        gw = {(p, q): float(G[p, q]) for p, q in combinations(range(n), 2)}
        spec = FlexSpec(epbq.TrivialLine(), dec, lam, gw)
        if classify(assemble_gh(spec)[0]).kind is space:
            break
        eta *= 0.5
    return _require(spec, space)


def rational_witness(space, sizes, delta: float = 0.2, signs=None) -> FlexSpec:
    space = SpaceKind(space)
    sizes = tuple(sizes)
    spec = rational_point(sizes, delta, signs)
    if space is SpaceKind.SPHERICAL:
        return _require(spec, space)
    if all(s == 1 for s in sizes):
        n = len(sizes)
        plus, minus = rational_lambda_bounds(n, delta)

        def path(th):
            lam = (plus[0] + th * (minus[0] - plus[0]),) + plus[1:]
            return replace(spec, lam=lam)

        try:
            return _require(_cross_to(space, path), space)
        except WitnessError:
            pass
    return _require(_deform(space, spec), space)


def euclidean_polish(n: int, delta: float, signs=None) -> tuple[FlexSpec, float]:
    """All-singleton rational point with det G = 0, found between lambda+ and lambda-.

    Returns the spec and the root lambda_1.
    """
    spec = rational_point((1,) * n, delta, signs)
    plus, minus = rational_lambda_bounds(n, delta)

    def path(th):
        return replace(spec, lam=(plus[0] + th * (minus[0] - plus[0]),) + plus[1:])

    root = _first_crossing(path)
    if root is None:
        raise WitnessError("det G does not change sign between lambda+ and lambda-")
    out = path(root)
    return out, out.lam[0]


def elliptic_witness(space, sizes, k_prime: float = 1e-3, kind: int = 1, m_prime=None, delta: float = 0.2):
    """Elliptic point near k = 1, transported from the near-identity rational point.

    At k = 1 the coordinate dn(u - sigma) equals 2 e^sigma / (x + e^(2 sigma) / x)
    with x = e^u. So mu_j = eps_j e^(2 sigma_j) and lambda_p = 1 / (2 lambda~_p e^sigma_j)
    reproduce the rational Gram matrix in the limit.
    """
    space = SpaceKind(space)
    sizes = tuple(sizes)
    m = len(sizes)
    m_prime = m if m_prime is None else int(m_prime)
    signs = [1 if j < m_prime else -1 for j in range(m)]
    rat = rational_point(sizes, delta, signs)
    sigma = tuple(0.5 * math.log(abs(v)) for v in rat.curve.mu)
    jb = rat.decomp.block_of()
    lam = tuple(0.5 / (rat.lam[p] * math.exp(sigma[jb[p]])) for p in range(rat.n))
    k = math.sqrt((1.0 - k_prime) * (1.0 + k_prime))
    cls = epbq.EllipticFirst if kind == 1 else epbq.EllipticSecond
    spec = FlexSpec(cls(k, sigma, m_prime), rat.decomp, lam, _zero_within(rat.decomp))
    if space is SpaceKind.SPHERICAL:
        return _require(spec, space)
    return _require(_deform(space, spec), space)


def exotic_witness(space, sizes=(1, 1, 1), k_prime: float = 0.01, alpha: int = 1) -> FlexSpec:
    """Exotic point with |lambda| ~ k'^(-1/2) on blocks 1, 2 and ~ k'^(-1/4) on block 3."""
    space = SpaceKind(space)
    if space is not SpaceKind.SPHERICAL:
        raise NotRealisableHereError(
            f"exotic families are not realisable in {space.value} space: the Gram identity "
            "g_pq = g_pr g_qr forces a positive definite G"
        )
    dec = Decomposition.from_type(sizes)
    if dec.m != 3:
        raise SpecError("exotic families have exactly three blocks")
    # larger blocks need a smaller k' before G gets close enough to the identity
    for _ in range(8):
        spec = _exotic_point(dec, k_prime, alpha)
        if classify(assemble_gh(spec)[0]).kind is space:
            break
        k_prime *= 0.2
    return _require(spec, space)


def _exotic_point(dec: Decomposition, k_prime: float, alpha: int) -> FlexSpec:
    k = math.sqrt((1.0 - k_prime) * (1.0 + k_prime))
    base = [k_prime**-0.5, k_prime**-0.5, k_prime**-0.25]
    lam = [0.0] * dec.n
    for j, block in enumerate(dec.blocks):
        for r, p in enumerate(block):
            lam[p] = base[j] * (1.0 + 0.25 * r)
    return FlexSpec(epbq.Exotic(k, alpha), dec, tuple(lam), _zero_within(dec))


def witnesses(family: str, space, sizes, param: float | None = None, **kw) -> FlexSpec:
    """Dispatch to the witness for ``family``; ``param`` is eta, delta or k' as appropriate."""
    if family == "simplest":
        n = sizes if isinstance(sizes, int) else sum(sizes)
        return simplest_witness(space, n, 0.05 if param is None else param, **kw)
    if family == "rational":
        return rational_witness(space, sizes, 0.2 if param is None else param, **kw)
    if family in ("elliptic1", "elliptic2"):
        kind = 1 if family == "elliptic1" else 2
        return elliptic_witness(space, sizes, 1e-3 if param is None else param, kind=kind, **kw)
    if family == "exotic":
        return exotic_witness(space, sizes, 0.01 if param is None else param, **kw)
    raise SpecError(f"unknown family {family!r}")
