"""
Rank minimization over the RIS profile
======================================

The nuclear norm solve, its thresholded rank, and how it compares with
zeroing rows outright.
"""

import numpy as np

from sdofbounds.upper_bound import (
    generic_min_rank,
    min_rank_constructive,
    min_rank_nuclear,
    thresholded_rank,
)

rng = np.random.default_rng(0)


def crandn(*shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


# one element on a 2x2 link: a single root of an affine determinant
H, g, d = crandn(2, 2), crandn(2, 1), crandn(1, 2)
res = min_rank_nuclear(H, g, d)
print("nuclear rank", res.rank, "phi", np.round(res.phi, 4))
print("determinant root", np.round(-1 / (d[0] @ np.linalg.solve(H, g[:, 0])), 4))
print("constructive rank", min_rank_constructive(H, g, d).rank)

# larger links: nuclear rank vs the dimension count floor vs row zeroing.
# The floor is what a generic family can reach; the local refinement does
# not always find it with few restarts.
for N, M, r in [(3, 3, 4), (4, 3, 6), (3, 4, 8), (4, 4, 9)]:
    H, G, D = crandn(N, M), crandn(N, r), crandn(r, M)
    nuc = min_rank_nuclear(H, G, D, restarts=4)
    cons = min_rank_constructive(H, G, D)
    print(f"{N}x{M} r={r:2d}  nuclear={nuc.rank}  constructive={cons.rank}  "
          f"floor={generic_min_rank(N, M, r)}  objectives={np.round(nuc.restart_objectives, 4)}")

X = H + (G * nuc.phi) @ D
print("singular values at the last solution", np.round(np.linalg.svd(X, compute_uv=False), 6))
print("thresholded", thresholded_rank(X))
