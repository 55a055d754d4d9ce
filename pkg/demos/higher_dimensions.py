"""
Flexible cross-polytopes beyond dimension three
===============================================

Witness points for each family, in spherical, euclidean and hyperbolic space,
with the number of free parameters of each family.
"""

from flexpoly.flexbuild import build, verify
from flexpoly.witnesses import (
    elliptic_witness,
    exotic_witness,
    family_dimension,
    rational_witness,
    simplest_witness,
)

cases = [
    ("simplest", (4,), simplest_witness("hyperbolic", 4)),
    ("rational", (2, 2), rational_witness("spherical", (2, 2))),
    ("rational", (2, 1, 1), rational_witness("euclidean", (2, 1, 1))),
    ("rational", (1, 1, 1, 1, 1), rational_witness("spherical", (1, 1, 1, 1, 1))),
    ("elliptic1", (1, 1, 1), elliptic_witness("spherical", (1, 1, 1), kind=1)),
    ("exotic", (2, 1, 1), exotic_witness("spherical", (2, 1, 1), alpha=3)),
]

for family, sizes, spec in cases:
    poly = build(spec)
    rep = verify(poly, samples=100)
    worst = max(rep.max_rel_dev.values())
    print(
        f"{family:9} {str(sizes):16} n={spec.n} {poly.space.kind.value:10} "
        f"parameters={family_dimension(family, sizes):2}  verified={rep.passed}  worst deviation={worst:.1e}"
    )

# exotic families exist only on the sphere
try:
    exotic_witness("euclidean")
except Exception as exc:
    print(type(exc).__name__ + ":", exc)
