"""Flexible cross-polytopes in euclidean, spherical and hyperbolic space."""

from . import butterfly, elliptic, epbq, flexbuild, geometry, witnesses
from .butterfly import GHPair, classify, recover, reversion
from .flexbuild import Decomposition, FlexSpec, build, frame_at, verify
from .geometry import AmbientSpace, SpaceKind
from .witnesses import family_dimension

__all__ = [
    "AmbientSpace",
    "Decomposition",
    "FlexSpec",
    "GHPair",
    "SpaceKind",
    "build",
    "butterfly",
    "classify",
    "elliptic",
    "epbq",
    "family_dimension",
    "flexbuild",
    "frame_at",
    "geometry",
    "recover",
    "reversion",
    "verify",
    "witnesses",
]

__version__ = "0.1.0"
