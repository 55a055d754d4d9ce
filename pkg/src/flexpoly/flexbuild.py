"""Assemble flexible cross-polytopes from a curve and a block decomposition.

Every index p is assigned to a block j(p) and a nonzero scale lambda_p. Along
the flexion t_p = lambda_p z_{j(p)}(u), where z is a point of the curve. The
pairwise relations of the curve fix G and H for pairs in different blocks.
Pairs in the same block have proportional t and a free Gram entry.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from . import epbq
from .butterfly import (
    Butterfly,
    Classification,
    GHPair,
    Verdict,
    classify,
    recover,
    wing_positions,
)
from .errors import ContractViolation, NotRealisableHereError, SignatureError, SpecError
from .geometry import SpaceKind

DEFAULT_TOLS = {
    "bb_rel": 1e-8,
    "ab_rel": 1e-10,
    "aa_rel": 1e-10,
    "biquad": 1e-9,
    "model": 1e-9,
    "e_matrix": 1e-8,
    "proportional": 1e-9,
}


@dataclass(frozen=True)
class Decomposition:
    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(p) for p in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        flat = sorted(p for b in blocks for p in b)
        if flat != list(range(self.n)) or any(len(b) == 0 for b in blocks):
            raise SpecError(f"blocks {blocks} do not partition 0..{self.n - 1}")

    @classmethod
    def from_type(cls, sizes) -> "Decomposition":
        """Consecutive blocks of the given sizes."""
        blocks, start = [], 0
        for s in sizes:
            blocks.append(tuple(range(start, start + s)))
            start += s
        return cls(start, tuple(blocks))

    @property
    def m(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def block_of(self) -> list[int]:
        out = [0] * self.n
        for j, b in enumerate(self.blocks):
            for p in b:
                out[p] = j
        return out

    def within_pairs(self) -> list[tuple[int, int]]:
        return [pq for b in self.blocks for pq in combinations(sorted(b), 2)]


@dataclass(frozen=True)
class FlexSpec:
    curve: object
    decomp: Decomposition
    lam: tuple[float, ...]
    g_within: dict = field(default_factory=dict)
    space: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(float(v) for v in self.lam))
        gw = {}
        for key, v in dict(self.g_within).items():
            p, q = sorted(int(i) for i in key)
            gw[(p, q)] = float(v)
        object.__setattr__(self, "g_within", gw)
        if self.space != "auto":
            object.__setattr__(self, "space", SpaceKind(self.space).value)

    @property
    def n(self) -> int:
        return self.decomp.n


@dataclass
class Biquad:
    """Matrices of the relations A t_p^2 t_q^2 + B_pq t_p^2 - 2 t_p t_q + B_qp t_q^2 + E = 0."""

    A: np.ndarray
    B: np.ndarray
    E: np.ndarray


@dataclass
class FlexiblePolytope:
    spec: FlexSpec
    pair: GHPair
    biquad: Biquad
    classification: Classification
    butterfly: Butterfly

    @property
    def space(self):
        return self.butterfly.space


@dataclass
class Frame:
    u: float
    t: np.ndarray
    phi: np.ndarray
    a: np.ndarray
    b: np.ndarray
    space: object


@dataclass
class EdgeLengths:
    aa: np.ndarray
    ab: np.ndarray
    bb: np.ndarray


# --------------------------------------------------------------- assembly


def validate_spec(spec: FlexSpec) -> None:
    curve, dec, lam = spec.curve, spec.decomp, spec.lam
    if dec.n < 3:
        raise SpecError(f"need n >= 3, got {dec.n}")
    if len(lam) != dec.n:
        raise SpecError(f"lambda has {len(lam)} entries for n = {dec.n}")
    if curve.m != dec.m:
        raise SpecError(f"curve has {curve.m} coordinates but the decomposition has {dec.m} blocks")
    if any(v == 0 or not math.isfinite(v) for v in lam):
        raise SpecError("every lambda must be finite and nonzero")
    needed = set(dec.within_pairs())
    if set(spec.g_within) != needed:
        missing = sorted(needed - set(spec.g_within))
        extra = sorted(set(spec.g_within) - needed)
        raise SpecError(f"g_within keys mismatch: missing {missing}, unexpected {extra}")
    for p, q in needed:
        if math.isclose(abs(lam[p]), abs(lam[q]), rel_tol=1e-12):
            raise SpecError(f"lambda_{p} = +-lambda_{q} inside one block")
        if not math.isfinite(spec.g_within[(p, q)]):
            raise SpecError(f"g_within[{p},{q}] is not finite")


def assemble_gh(spec: FlexSpec) -> tuple[GHPair, Biquad]:
    """(G, H) and the dihedral relation matrices of ``spec``."""
    validate_spec(spec)
    n, lam = spec.n, spec.lam
    jb = spec.decomp.block_of()
    cf = None if spec.decomp.m == 1 else epbq.coeffs(spec.curve)
    G, H, E = np.eye(n), np.eye(n), np.zeros((n, n))
    for p, q in combinations(range(n), 2):
        lp, lq = lam[p], lam[q]
        j, l = jb[p], jb[q]
        if j == l:
            g = spec.g_within[(p, q)]
            G[p, q] = G[q, p] = g
            H[p, q] = 2.0 * lp * (lp * g - lq) / (lp * lp - lq * lq)
            H[q, p] = 2.0 * lq * (lq * g - lp) / (lq * lq - lp * lp)
            continue
        a, bjl, blj, e = cf.a[j, l], cf.b[j, l], cf.b[l, j], cf.e[j, l]
        Epq = lp * lq * e
        E[p, q] = E[q, p] = Epq
        G[p, q] = G[q, p] = 0.5 * (-a / (lp * lq) + lq * bjl / lp + lp * blj / lq - Epq)
        H[p, q] = lp * blj / lq - Epq
        H[q, p] = lq * bjl / lp - Epq
    pair = GHPair(n, G, H)
    return pair, biquad_from_gh(pair, E)


def biquad_from_gh(pair: GHPair, E) -> Biquad:
    G, H = pair.G, pair.H
    E = np.array(E, dtype=float)
    A = H.T + H - 2.0 * G + E
    B = H.T + E
    for X in (A, B, E):
        np.fill_diagonal(X, np.nan)
    return Biquad(A, B, E)


def gh_from_biquad(bq: Biquad) -> GHPair:
    """Inverse of :func:`biquad_from_gh`."""
    n = bq.A.shape[0]
    G, H = np.eye(n), np.eye(n)
    for p in range(n):
        for q in range(n):
            if p != q:
                G[p, q] = 0.5 * (-bq.A[p, q] + bq.B[p, q] + bq.B[q, p] - bq.E[p, q])
                H[p, q] = bq.B[q, p] - bq.E[p, q]
    G = np.triu(G) + np.triu(G, 1).T
    return GHPair(n, G, H)


# ------------------------------------------------------------------ build


def _obstruction(spec: FlexSpec, want: SpaceKind, cls: Classification) -> str:
    msg = f"classified as {cls.verdict.value}"
    if cls.violated:
        msg += f" ({cls.violated})"
    if isinstance(spec.curve, epbq.Exotic) and want is not SpaceKind.SPHERICAL:
        msg += "; the exotic Gram identity g_pq = g_pr g_qr forbids euclidean and hyperbolic realisations"
    return f"not realisable in {want.value} space: {msg}"


def build(spec: FlexSpec, flip_a=None, flip_b=None) -> FlexiblePolytope:
    """Assemble, classify and realise ``spec``.

    ``flip_a``/``flip_b`` choose antipodal vertices in spherical space.
    """
    pair, bq = assemble_gh(spec)
    cls = classify(pair)
    if spec.space != "auto":
        want = SpaceKind(spec.space)
        if cls.kind is not want:
            raise NotRealisableHereError(_obstruction(spec, want, cls))
    elif cls.verdict is Verdict.NONE:
        raise NotRealisableHereError(f"not realisable in any space: {cls.violated}")
    try:
        bf = recover(pair, cls.kind, flip_a, flip_b)
    except SignatureError as exc:
        raise NotRealisableHereError(str(exc)) from exc
    return FlexiblePolytope(spec, pair, bq, cls, bf)


# ----------------------------------------------------------------- frames


def dihedral_t(poly: FlexiblePolytope, u: float) -> np.ndarray:
    """t_p = lambda_p z_{j(p)}(u) as unit pairs."""
    z = epbq.eval(poly.spec.curve, u)
    jb = poly.spec.decomp.block_of()
    lam = np.asarray(poly.spec.lam)
    zz = z[jb]
    return epbq.proj(lam * zz[:, 0], zz[:, 1])


def frame_at(poly: FlexiblePolytope, u: float) -> Frame:
    t = dihedral_t(poly, u)
    phi = 2.0 * np.arctan2(t[:, 0], t[:, 1])
    b = wing_positions(poly.butterfly, t)
    return Frame(float(u), t, phi, poly.butterfly.a.copy(), b, poly.space)


def _pairwise_dist(space, X, Y) -> np.ndarray:
    return np.array([[space.distance(x, y) for y in Y] for x in X])


def edge_lengths(frame: Frame) -> EdgeLengths:
    """All n(n-1)/2 + n(n-1) + n(n-1)/2 edge lengths; non-edges (a_p b_p) are NaN."""
    sp = frame.space
    aa = _pairwise_dist(sp, frame.a, frame.a)
    ab = _pairwise_dist(sp, frame.a, frame.b)
    bb = _pairwise_dist(sp, frame.b, frame.b)
    np.fill_diagonal(aa, np.nan)
    np.fill_diagonal(ab, np.nan)
    np.fill_diagonal(bb, np.nan)
    return EdgeLengths(aa, ab, bb)


def e_matrix(poly: FlexiblePolytope, frame: Frame) -> np.ndarray:
    """The constant term of each dihedral relation, measured from the realised frame."""
    bf, sp = poly.butterfly, poly.space
    n = bf.n
    out = np.full((n, n), np.nan)
    for p, q in combinations(range(n), 2):
        if sp.kind is SpaceKind.EUCLIDEAN:
            now = float(np.sum((frame.b[p] - frame.b[q]) ** 2))
            ref = float(np.sum((bf.b0[p] - bf.b0[q]) ** 2))
            val = 0.5 * (ref - now)
        else:
            # cos of spherical distance is (x, y); cosh of hyperbolic distance is -(x, y)
            val = float(sp.bilinear(frame.b[p], frame.b[q]) - sp.bilinear(bf.b0[p], bf.b0[q]))
        out[p, q] = out[q, p] = val / (2.0 * bf.alt_b[p] * bf.alt_b[q])
    return out


def sample_grid(curve, samples: int) -> np.ndarray:
    """Deterministic parameter samples, one of which is a pole when the curve has one."""
    if samples < 1:
        raise ContractViolation("need at least one sample")
    poles = epbq.poles(curve)
    if not epbq.is_elliptic(curve):
        rest = samples - (1 if poles else 0)
        npos = (rest + 1) // 2
        nneg = rest - npos
        grid = list(np.logspace(-2, 2, npos)) if npos > 1 else [1.0] * npos
        grid += list(-np.logspace(-2, 2, nneg)) if nneg > 1 else [-1.0] * nneg
        if poles:
            grid.append(poles[0])
        return np.array(sorted(grid))
    P = epbq.period(curve)
    rest = samples - (1 if poles else 0)
    step = P / max(rest, 1)
    grid = []
    for i in range(rest):
        u = (i + 0.3183098861837907) * step
        for z in poles:
            d = math.remainder(u - z, P)
            if abs(d) < 1e-6:
                u = z + math.copysign(1e-6, d if d else 1.0) * 2
        grid.append(u)
    if poles:
        grid.append(poles[0])
    return np.array(sorted(grid))


# ----------------------------------------------------------------- verify


@dataclass
class VerificationReport:
    samples: int
    space: str
    max_rel_dev: dict
    max_biquad_residual: float
    max_model_residual: float
    min_inequality: float
    max_e_matrix_error: float
    max_proportional_residual: float
    essential: bool
    poles_hit: int
    tolerances: dict
    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _rel_dev(ref, vals) -> float:
    mask = ~np.isnan(ref)
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(vals[mask] - ref[mask]) / np.abs(ref[mask])))


def biquad_residual(bq: Biquad, t) -> float:
    s, c = t[:, 0], t[:, 1]
    n = len(s)
    worst = 0.0
    for p, q in combinations(range(n), 2):
        r = (
            bq.A[p, q] * s[p] ** 2 * s[q] ** 2
            + bq.B[p, q] * s[p] ** 2 * c[q] ** 2
            - 2.0 * s[p] * c[p] * s[q] * c[q]
            + bq.B[q, p] * c[p] ** 2 * s[q] ** 2
            + bq.E[p, q] * c[p] ** 2 * c[q] ** 2
        )
        worst = max(worst, abs(r))
    return worst


def verify(poly: FlexiblePolytope, samples: int = 200, tols: dict | None = None) -> VerificationReport:
    """Sample the flexion and check every invariant the construction promises."""
    tol = dict(DEFAULT_TOLS)
    if tols:
        tol.update(tols)
    grid = sample_grid(poly.spec.curve, samples)
    bq, n = poly.biquad, poly.spec.n
    dec = poly.spec.decomp
    lam = poly.spec.lam
    ref = edge_lengths(frame_at(poly, grid[0]))
    dev = {"aa": 0.0, "ab": 0.0, "bb": 0.0}
    biq = model = e_err = prop = 0.0
    seen = [set() for _ in range(n)]
    poles_hit = 0
    for u in grid:
        fr = frame_at(poly, u)
        if np.any(fr.t[:, 1] == 0):
            poles_hit += 1
        L = edge_lengths(fr)
        dev["aa"] = max(dev["aa"], _rel_dev(ref.aa, L.aa))
        dev["ab"] = max(dev["ab"], _rel_dev(ref.ab, L.ab))
        dev["bb"] = max(dev["bb"], _rel_dev(ref.bb, L.bb))
        biq = max(biq, biquad_residual(bq, fr.t))
        model = max(model, poly.space.model_residual(fr.b), poly.space.model_residual(fr.a))
        Em = e_matrix(poly, fr)
        mask = ~np.isnan(bq.E)
        e_err = max(e_err, float(np.max(np.abs(Em[mask] - bq.E[mask]))))
        for p, q in dec.within_pairs():
            s, c = fr.t[:, 0], fr.t[:, 1]
            prop = max(prop, abs(lam[q] * s[p] * c[q] - lam[p] * s[q] * c[p]) / max(abs(lam[p]), abs(lam[q])))
        for p in range(n):
            seen[p].add((round(fr.t[p, 0], 12), round(fr.t[p, 1], 12)))
    ineq = math.inf
    for p, q in combinations(range(n), 2):
        ineq = min(ineq, epbq.quartic_discriminant(bq.A[p, q], bq.B[p, q], bq.B[q, p], bq.E[p, q]))
    essential = all(len(s) >= 2 for s in seen)
    checks = {
        "aa_lengths": dev["aa"] <= tol["aa_rel"],
        "ab_lengths": dev["ab"] <= tol["ab_rel"],
        "bb_lengths": dev["bb"] <= tol["bb_rel"],
        "biquadratic": biq <= tol["biquad"],
        "model_points": model <= tol["model"],
        "inequality": ineq > 0,
        "e_matrix": e_err <= tol["e_matrix"],
        "proportional": prop <= tol["proportional"],
        "essential": essential,
    }
    return VerificationReport(
        len(grid), poly.space.kind.value, dev, biq, model, ineq, e_err, prop, essential, poles_hit, tol, checks
    )
