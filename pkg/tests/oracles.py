"""Reference computations written independently of the package code.

Nothing here imports from ``sdofbounds``; each oracle goes the slow,
obvious way so it can be trusted against the optimized paths.
"""

import itertools

import numpy as np


def p0_bruteforce(M1, M2, N1, N2, Ne, R):
    """Optimal value of the elimination program by plain enumeration."""
    best = 0
    for fe1 in range(min(Ne, M1) + 1):
        for fe2 in range(min(Ne, M2) + 1):
            for f12 in range(min(N1, M2) + 1):
                for f21 in range(min(N2, M1) + 1):
                    cost = fe1 * max(Ne, M1) + fe2 * max(Ne, M2) + f12 * max(N1, M2) + f21 * max(N2, M1)
                    if cost > R:
                        continue
                    De1, De2 = min(Ne, M1) - fe1, min(Ne, M2) - fe2
                    D12, D21 = min(N1, M2) - f12, min(N2, M1) - f21
                    t = min(
                        N2 - D21 + M1 - De1,
                        M2 - D12 + N1 - De2,
                        min(N1, M1 - De1) + min(N2, M2 - De2),
                    )
                    best = max(best, t)
    return best


def p0_no_eve(M1, M2, N1, N2, R):
    """Interference-only program over ``(f12, f21)``."""
    best = 0
    for f12, f21 in itertools.product(range(min(N1, M2) + 1), range(min(N2, M1) + 1)):
        if f12 * max(N1, M2) + f21 * max(N2, M1) > R:
            continue
        D12, D21 = min(N1, M2) - f12, min(N2, M1) - f21
        best = max(best, min(N2 - D21 + M1, M2 - D12 + N1, min(N1, M1) + min(N2, M2)))
    return best


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def det_root(H, g, d):
    """Scalar ``phi`` making ``H + phi * outer(g, d)`` singular (2x2 or any square).

    ``det(H + phi g d^T) = det(H) (1 + phi d^T H^{-1} g)`` is affine in ``phi``.
    """
    return -1.0 / (d @ np.linalg.solve(H, g))


def random_rank(rng, n, m, k):
    return crandn(rng, n, k) @ crandn(rng, k, m)


def ic_bound_numeric(M1, M2, N1, N2, D12, D21, rng):
    """Interference-channel sum-DoF bound from numerically measured ranks.

    Builds random channels with the prescribed cross ranks, measures the ranks
    of the stacked matrices and combines them with the trivial caps.
    """
    rk = np.linalg.matrix_rank
    H11, H22 = crandn(rng, N1, M1), crandn(rng, N2, M2)
    H12 = random_rank(rng, N1, M2, D12)
    H21 = random_rank(rng, N2, M1, D21)
    rx1 = rk(np.hstack([H11, H12])) + rk(np.vstack([H12, H22])) - rk(H12)
    rx2 = rk(np.hstack([H22, H21])) + rk(np.vstack([H21, H11])) - rk(H21)
    return min(rx1, rx2, M1 + M2, N1 + N2)
