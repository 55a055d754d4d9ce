"""(G, H) data of a cross-polytope, its classification and geometric recovery.

A cross-polytope with vertex pairs (a_p, b_p) is recorded as two n x n
matrices. ``G`` is the Gram matrix of the unit normals n_p of the hyperplanes
through a_1..a_n minus a_p. ``H`` records the position of b_p relative to the
dual frame. The vertex b_p moves on a circle ("wing") in the plane spanned by
n_p and a unit vector m orthogonal to all normals. The rotation angle is phi_p
and t_p = tan(phi_p / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ContractViolation, DegenerateAltitudeError, SignatureError
from .geometry import SIGNATURE_FOR_KIND, AmbientSpace, SpaceKind, gram_factorize

RANK_TOL = 1e-9
ROWSPAN_TOL = 1e-8
MINOR_TOL = 1e-12
ALTITUDE_TOL = 1e-10


@dataclass
class GHPair:
    n: int
    G: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        self.G = np.array(self.G, dtype=float)
        self.H = np.array(self.H, dtype=float)
        n = self.n
        if n < 2 or self.G.shape != (n, n) or self.H.shape != (n, n):
            raise ContractViolation(f"G and H must both be {n}x{n}")
        if not np.all(np.isfinite(self.G)) or not np.all(np.isfinite(self.H)):
            raise ContractViolation("G and H must be finite")
        if np.any(np.diag(self.G) != 1.0) or np.any(np.diag(self.H) != 1.0):
            raise ContractViolation("G and H must have unit diagonal")
        if np.any(self.G != self.G.T):
            raise ContractViolation("G must be symmetric")

    def copy(self) -> "GHPair":
        return GHPair(self.n, self.G.copy(), self.H.copy())


# ----------------------------------------------------------------- classify


class Verdict(str, Enum):
    EUCLIDEAN = "euclidean"
    SPHERICAL = "spherical"
    HYPERBOLIC = "hyperbolic"
    NONE = "none"


@dataclass
class Classification:
    verdict: Verdict
    violated: str | None = None
    det: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def kind(self) -> SpaceKind | None:
        return None if self.verdict is Verdict.NONE else SpaceKind(self.verdict.value)

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "violated": self.violated, "det": self.det, **self.diagnostics}


def _minor_eigs(G: np.ndarray) -> list[float]:
    """Smallest eigenvalue of each principal submatrix with one index removed."""
    n = G.shape[0]
    out = []
    for p in range(n):
        keep = [q for q in range(n) if q != p]
        out.append(float(np.linalg.eigvalsh(G[np.ix_(keep, keep)])[0]))
    return out


def _max_minor(G: np.ndarray) -> float:
    n = G.shape[0]
    return max(float(np.linalg.det(np.delete(np.delete(G, p, 0), p, 1))) for p in range(n))


def classify(pair: GHPair) -> Classification:
    """Decide which space, if any, realises ``pair`` as a cross-polytope.

    Proper principal minors are positive iff every (n-1) x (n-1) principal
    submatrix is positive definite, which is what gets tested.
    """
    G, H, n = pair.G, pair.H, pair.n
    diag: dict = {}
    meig = _minor_eigs(G)
    diag["min_minor_eigenvalue"] = min(meig)
    det = float(np.linalg.det(G))
    if n > 2 and min(meig) <= MINOR_TOL:
        p = int(np.argmin(meig))
        return Classification(
            Verdict.NONE, f"proper principal minor without index {p} is not positive", det, diag
        )
    scale = _max_minor(G)
    diag["rank_threshold"] = RANK_TOL * scale
    if abs(det) < RANK_TOL * scale:
        w, V = np.linalg.eigh(G)
        null = V[:, int(np.argmin(np.abs(w)))]
        rows = []
        for p in range(n):
            norm = float(np.linalg.norm(H[p]))
            rows.append(abs(float(H[p] @ null)) / norm if norm > 0 else 0.0)
        diag["rowspan_residuals"] = rows
        bad = [p for p, r in enumerate(rows) if r <= ROWSPAN_TOL]
        if bad:
            return Classification(Verdict.NONE, f"row {bad[0]} of H lies in the row span of G", det, diag)
        return Classification(Verdict.EUCLIDEAN, None, det, diag)
    if det > 0:
        return Classification(Verdict.SPHERICAL, None, det, diag)
    w = np.linalg.eigvalsh(G)
    if np.sum(w < 0) != 1:
        return Classification(Verdict.NONE, "G has more than one negative eigenvalue", det, diag)
    Ginv = np.linalg.inv(G)
    forms = [float(H[p] @ Ginv @ H[p]) for p in range(n)]
    diag["dual_forms"] = forms
    bad = [p for p, v in enumerate(forms) if not v < 0]
    if bad:
        return Classification(Verdict.NONE, f"row {bad[0]} of H is not timelike for G^-1", det, diag)
    return Classification(Verdict.HYPERBOLIC, None, det, diag)


# ------------------------------------------------------------------ recover


@dataclass
class Butterfly:
    """Realised cross-polytope at the reference position phi = 0.

    ``a`` holds the anchored vertices a_p as rows, ``b0`` the reference wing
    positions, ``normals`` the n_p, ``duals`` the c_p. ``alt_a`` and ``alt_b``
    are the signed altitudes a_p and b_p.
    """

    space: AmbientSpace
    a: np.ndarray
    b0: np.ndarray
    normals: np.ndarray
    duals: np.ndarray
    m: np.ndarray
    alt_a: np.ndarray
    alt_b: np.ndarray

    @property
    def n(self) -> int:
        return self.a.shape[0]


@dataclass
class DihedralState:
    phi: np.ndarray
    t: np.ndarray  # unit pairs (s, c) with t = s / c


def _flags(flags, n) -> np.ndarray:
    if flags is None:
        return np.ones(n)
    f = np.asarray(flags)
    if f.shape != (n,):
        raise ContractViolation(f"need {n} sign flags")
    return np.where(f.astype(bool), -1.0, 1.0)


def recover(pair: GHPair, kind, flip_a=None, flip_b=None) -> Butterfly:
    """Realise ``pair`` in the space ``kind``.

    In spherical space the positive roots are taken; ``flip_a`` and ``flip_b``
    (boolean per index) send a_p or the whole wing of b_p to the antipode.
    In hyperbolic space signs are forced by the upper sheet and flags are
    ignored. In euclidean space the scale is fixed by making the vector of
    inverse altitudes a unit vector with positive first entry.
    """
    kind = SpaceKind(kind)
    G, H, n = pair.G, pair.H, pair.n
    space, N, m = gram_factorize(G, SIGNATURE_FOR_KIND[kind])
    if kind is SpaceKind.EUCLIDEAN:
        w, V = np.linalg.eigh(0.5 * (G + G.T))
        inv_a = V[:, 0]
        lead = inv_a[np.flatnonzero(np.abs(inv_a) > 1e-14)[0]]
        inv_a = inv_a * np.sign(lead)
        if np.min(np.abs(inv_a)) < ALTITUDE_TOL:
            raise DegenerateAltitudeError(f"inverse altitude {int(np.argmin(np.abs(inv_a)))} vanishes")
        alt_a = 1.0 / inv_a
        inv_b = H @ inv_a
        if np.min(np.abs(inv_b)) < ALTITUDE_TOL:
            raise DegenerateAltitudeError(f"wing altitude {int(np.argmin(np.abs(inv_b)))} is infinite")
        alt_b = 1.0 / inv_b
        # anchored vertices: (a_p, n_r) = a_r (delta_pr - 1/n), centroid at the origin
        P = np.linalg.pinv(N)
        a = np.empty_like(N)
        for p in range(n):
            rhs = alt_a * ((np.arange(n) == p) - 1.0 / n)
            a[p] = P @ rhs
        duals = a * inv_a[:, None]
        b0 = alt_b[:, None] * (H @ duals)
        return Butterfly(space, a, b0, N, duals, m, alt_a, alt_b)

    eps = space.epsilon
    Ginv = np.linalg.inv(G)
    duals = Ginv @ N
    qa = eps * np.diag(Ginv)
    qb = eps * np.einsum("pq,qr,pr->p", H, Ginv, H)
    if np.any(qa <= 0) or np.any(qb <= 0):
        raise SignatureError("altitude radicands are not positive; the pair is not of this kind")
    alt_a = 1.0 / np.sqrt(qa)
    alt_b = 1.0 / np.sqrt(qb)
    wing = H @ duals
    if kind is SpaceKind.SPHERICAL:
        alt_a = alt_a * _flags(flip_a, n)
        alt_b = alt_b * _flags(flip_b, n)
    else:
        alt_a = alt_a * np.sign(duals[:, -1])
        alt_b = alt_b * np.sign(wing[:, -1])
    a = alt_a[:, None] * duals
    b0 = alt_b[:, None] * wing
    return Butterfly(space, a, b0, N, duals, m, alt_a, alt_b)


def wing_position(bf: Butterfly, p: int, phi: float) -> np.ndarray:
    return bf.b0[p] + bf.alt_b[p] * ((math.cos(phi) - 1.0) * bf.normals[p] + math.sin(phi) * bf.m)


def wing_positions(bf: Butterfly, t) -> np.ndarray:
    """All b_p for projective values t_p given as unit pairs (s, c).

    With t = s/c on the unit circle, cos(phi) - 1 = -2 s^2 and sin(phi) = 2 s c,
    so poles need no special handling.
    """
    t = np.asarray(t, dtype=float)
    s, c = t[:, 0], t[:, 1]
    return bf.b0 + bf.alt_b[:, None] * ((-2.0 * s * s)[:, None] * bf.normals + (2.0 * s * c)[:, None] * bf.m)


def gh_from_butterfly(bf: Butterfly) -> GHPair:
    """Read (G, H) back off a realised butterfly."""
    sp, n = bf.space, bf.n
    G = np.array([[float(sp.bilinear(bf.normals[p], bf.normals[q])) for q in range(n)] for p in range(n)])
    H = np.eye(n)
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            if sp.kind is SpaceKind.EUCLIDEAN:
                r = (q + 1) % n
                v = bf.b0[p] - bf.a[r]
            else:
                v = bf.b0[p]
            H[p, q] = float(sp.bilinear(v, bf.normals[q])) / bf.alt_b[p]
    G = 0.5 * (G + G.T)
    np.fill_diagonal(G, 1.0)
    return GHPair(n, G, H)


# ---------------------------------------------------------------- reversions


class Reversion(str, Enum):
    A = "a"
    B = "b"


def reversion(pair: GHPair, p: int, kind) -> GHPair:
    """Reverse the orientation of a_p (kind "a") or of the wing of b_p (kind "b").

    Only row and column p change: for q != p,
    a: g_pq -> -g_pq, h_pq -> h_pq - 2 g_pq, h_qp -> -h_qp;
    b: h_pq -> 2 g_pq - h_pq.
    """
    kind = Reversion(kind)
    n = pair.n
    if not 0 <= p < n:
        raise ContractViolation(f"index {p} out of range")
    G, H = pair.G.copy(), pair.H.copy()
    q = np.arange(n) != p
    if kind is Reversion.A:
        H[p, q] = pair.H[p, q] - 2.0 * pair.G[p, q]
        H[q, p] = -pair.H[q, p]
        G[p, q] = -pair.G[p, q]
        G[q, p] = -pair.G[q, p]
    else:
        H[p, q] = 2.0 * pair.G[p, q] - pair.H[p, q]
    return GHPair(n, G, H)


def reversion_coeffs(A, B, E, p: int, kind):
    """Effect of a reversion at p on the matrices (A, B, E) of the dihedral relations."""
    kind = Reversion(kind)
    A, B, E = (np.array(x, dtype=float) for x in (A, B, E))
    A2, B2, E2 = A.copy(), B.copy(), E.copy()
    sign = 1.0 if kind is Reversion.A else -1.0
    n = A.shape[0]
    for q in range(n):
        if q == p:
            continue
        # pair (p, q): A -> B_qp, B_pq -> E, B_qp -> A, E -> B_pq (negated for b)
        A2[p, q] = A2[q, p] = sign * B[q, p]
        E2[p, q] = E2[q, p] = sign * B[p, q]
        B2[p, q] = sign * E[p, q]
        B2[q, p] = sign * A[p, q]
    return A2, B2, E2


def bricard_coeffs(alpha: float, beta: float, gamma: float, delta: float):
    """Coefficients of A t^2 t'^2 + B t^2 + 2C t t' + D t'^2 + E = 0.

    t and t' are tangents of half the dihedral angles at two adjacent edges of
    a tetrahedral angle. alpha is the face angle between those edges, beta and
    delta are the faces next to it, and gamma is the opposite face.
    """
    cg = math.cos(gamma)
    A = cg - math.cos(alpha + beta + delta)
    B = cg - math.cos(alpha + beta - delta)
    C = -2.0 * math.sin(beta) * math.sin(delta)
    D = cg - math.cos(alpha - beta + delta)
    E = cg - math.cos(alpha - beta - delta)
    return A, B, C, D, E


# ------------------------------------------------------------------- JSON


def gh_to_json(pair: GHPair) -> dict:
    return {"n": pair.n, "G": pair.G.tolist(), "H": pair.H.tolist()}


def gh_from_json(obj) -> GHPair:
    if not isinstance(obj, dict) or set(obj) != {"n", "G", "H"}:
        raise ContractViolation("GH object must have exactly the fields n, G, H")
    try:
        return GHPair(int(obj["n"]), np.array(obj["G"], dtype=float), np.array(obj["H"], dtype=float))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ContractViolation):
            raise
        raise ContractViolation(f"malformed GH object: {exc}") from exc
