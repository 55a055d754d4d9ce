"""
Classifying and realising (G, H) pairs
======================================

A cross-polytope with one facet fixed is described by two matrices. G is the
Gram matrix of the facet normals, H places the opposite vertices. The
signature of G decides the space.
"""

import math

import numpy as np

from flexpoly.butterfly import GHPair, classify, recover, reversion, wing_position

rng = np.random.default_rng(1)

# unit vectors in R^3 give a positive definite G: spherical
V = rng.normal(size=(3, 3))
V /= np.linalg.norm(V, axis=1, keepdims=True)
G = V @ V.T
G = np.triu(G, 1) + np.triu(G, 1).T + np.eye(3)
H = np.eye(3) + 0.3 * (rng.normal(size=(3, 3)) * (1 - np.eye(3)))
pair = GHPair(3, G, H)
print(classify(pair).to_json())

# realise it on the unit sphere in R^4
bf = recover(pair, "spherical")
print("anchored vertices on the sphere:", np.linalg.norm(bf.a, axis=1))

# three unit vectors in a plane give a singular G: euclidean
W = rng.normal(size=(3, 2))
W /= np.linalg.norm(W, axis=1, keepdims=True)
G = W @ W.T
G = np.triu(G, 1) + np.triu(G, 1).T + np.eye(3)
flat = GHPair(3, G, H)
print(classify(flat).verdict.value)

# a b-reversion rewrites H but, after a half turn of the wing, not the geometry
p = 1
rev = reversion(pair, p, "b")
bf2 = recover(rev, "spherical", flip_b=[q == p for q in range(3)])
phi = 0.8
print("same vertex:", np.allclose(wing_position(bf, p, phi), wing_position(bf2, p, phi + math.pi)))
