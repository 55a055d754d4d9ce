"""Ambient model spaces and Gram-matrix factorisation.

Three models are supported:

* euclidean ``E^n``: vectors in R^n with the dot product;
* spherical ``S^n``: unit vectors in R^(n+1);
* hyperbolic ``L^n``: the upper sheet of the hyperboloid in R^(n,1). The
  timelike coordinate is the *last* one.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ContractViolation, SignatureError

# eigenvalues below this magnitude count as zero when deciding inertia
EIG_CLIP = 1e-12
# distance routines reject points whose model residual exceeds this
MODEL_TOL = 1e-8


class SpaceKind(str, Enum):
    EUCLIDEAN = "euclidean"
    SPHERICAL = "spherical"
    HYPERBOLIC = "hyperbolic"


class GramSignature(str, Enum):
    POS_DEF = "pos_def"
    POS_SEMIDEF = "pos_semidef_rank_n_minus_1"
    LORENTZIAN = "lorentzian"


SIGNATURE_FOR_KIND = {
    SpaceKind.SPHERICAL: GramSignature.POS_DEF,
    SpaceKind.EUCLIDEAN: GramSignature.POS_SEMIDEF,
    SpaceKind.HYPERBOLIC: GramSignature.LORENTZIAN,
}


@dataclass(frozen=True)
class AmbientSpace:
    kind: SpaceKind
    n: int

    def __post_init__(self):
        object.__setattr__(self, "kind", SpaceKind(self.kind))
        if self.n < 1:
            raise ContractViolation(f"dimension must be positive, got {self.n}")

    @property
    def dim(self) -> int:
        """Number of ambient coordinates."""
        return self.n if self.kind is SpaceKind.EUCLIDEAN else self.n + 1

    @property
    def epsilon(self) -> int:
        """Value of (x, x) on model points: +1 spherical, -1 hyperbolic, 0 otherwise."""
        return {SpaceKind.EUCLIDEAN: 0, SpaceKind.SPHERICAL: 1, SpaceKind.HYPERBOLIC: -1}[self.kind]

    @property
    def metric(self) -> np.ndarray:
        d = np.ones(self.dim)
        if self.kind is SpaceKind.HYPERBOLIC:
            d[-1] = -1.0
        return d

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise ContractViolation(
                f"vector of length {x.shape[-1]} does not live in {self.kind.value} space of dim {self.dim}"
            )
        return x

    def bilinear(self, x, y) -> np.ndarray:
        x, y = self._check(x), self._check(y)
        return np.sum(x * y * self.metric, axis=-1)

    def model_residual(self, x) -> float:
        """|(x, x) - epsilon| for curved models, 0 in euclidean space."""
        if self.kind is SpaceKind.EUCLIDEAN:
            return 0.0
        return float(np.max(np.abs(self.bilinear(x, x) - self.epsilon)))

    def on_model(self, x, tol: float = MODEL_TOL) -> bool:
        x = self._check(x)
        if self.kind is SpaceKind.HYPERBOLIC and np.any(x[..., -1] <= 0):
            return False
        return self.model_residual(x) <= tol

    def distance(self, x, y) -> float:
        x, y = self._check(x), self._check(y)
        if self.kind is SpaceKind.EUCLIDEAN:
            return float(np.linalg.norm(x - y))
        for v in (x, y):
            if not self.on_model(v):
                raise ContractViolation(
                    f"point is off the {self.kind.value} model (residual {self.model_residual(v):.3e})"
                )
        if self.kind is SpaceKind.SPHERICAL:
            # the half-chord is far better conditioned than arccos near 0 and pi
            half = 0.5 * np.linalg.norm(x - y)
            return float(2.0 * np.arcsin(min(half, 1.0)))
        c = -float(self.bilinear(x, y))
        return float(np.arccosh(max(c, 1.0)))


@dataclass(frozen=True)
class AmbientVector:
    """A coordinate vector tagged with the space it lives in."""

    space: AmbientSpace
    coords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coords", self.space._check(self.coords).copy())

    def dot(self, other: "AmbientVector") -> float:
        if other.space != self.space:
            raise ContractViolation("vectors live in different spaces")
        return float(self.space.bilinear(self.coords, other.coords))


def bilinear(space: AmbientSpace, x, y):
    return space.bilinear(x, y)


def distance(space: AmbientSpace, x, y) -> float:
    return space.distance(x, y)


def gram_factorize(G, signature, tol: float = 1e-9):
    """Find vectors n_1..n_n with Gram matrix ``G`` plus a unit vector ``m`` orthogonal to them.

    Returns ``(space, N, m)`` where the rows of ``N`` are the n_p. The
    ambient space is S^n for ``pos_def``, E^n for ``pos_semidef`` and L^n for
    ``lorentzian``. Eigenvalues within ``EIG_CLIP`` of zero are treated as zero,
    except in the semidefinite case where the single smallest eigenvalue must
    be below ``tol`` times the spectral scale.
    """
    signature = GramSignature(signature)
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    if G.shape != (n, n) or not np.allclose(G, G.T, rtol=0, atol=1e-14):
        raise ContractViolation("Gram matrix must be square and symmetric")
    w, V = np.linalg.eigh(0.5 * (G + G.T))
    scale = max(1.0, float(np.max(np.abs(w))))

    if signature is GramSignature.POS_DEF:
        if w[0] <= EIG_CLIP * scale:
            raise SignatureError(f"matrix is not positive definite (smallest eigenvalue {w[0]:.3e})")
        space = AmbientSpace(SpaceKind.SPHERICAL, n)
        N = np.zeros((n, n + 1))
        N[:, :n] = V * np.sqrt(w)
        m = np.zeros(n + 1)
        m[n] = 1.0
    elif signature is GramSignature.POS_SEMIDEF:
        if abs(w[0]) > tol * scale or w[1] <= EIG_CLIP * scale:
            raise SignatureError(
                f"matrix is not positive semidefinite of corank one (eigenvalues {w[0]:.3e}, {w[1]:.3e})"
            )
        space = AmbientSpace(SpaceKind.EUCLIDEAN, n)
        N = np.zeros((n, n))
        N[:, : n - 1] = V[:, 1:] * np.sqrt(w[1:])
        m = np.zeros(n)
        m[n - 1] = 1.0
    else:
        if w[0] >= -EIG_CLIP * scale or (n > 1 and w[1] <= EIG_CLIP * scale):
            raise SignatureError(f"matrix does not have exactly one negative eigenvalue (eigenvalues {w[:2]})")
        space = AmbientSpace(SpaceKind.HYPERBOLIC, n)
        N = np.zeros((n, n + 1))
        N[:, : n - 1] = V[:, 1:] * np.sqrt(w[1:])
        N[:, n] = V[:, 0] * np.sqrt(-w[0])
        m = np.zeros(n + 1)
        m[n - 1] = 1.0
    return space, N, m


def null_vector(G) -> np.ndarray:
    """Unit eigenvector of the eigenvalue of smallest magnitude, first nonzero entry positive."""
    w, V = np.linalg.eigh(np.asarray(G, dtype=float))
    v = V[:, int(np.argmin(np.abs(w)))]
    lead = v[np.flatnonzero(np.abs(v) > 1e-14)[0]]
    return v * np.sign(lead)
