"""Small numerical helpers shared across modules."""

import numpy as np

RANK_RTOL = 1e-6


def numerical_rank(A, rtol=RANK_RTOL, scale=1.0):
    """Count singular values above ``rtol * max(sigma_max, scale)``.

    ``scale`` keeps a matrix that was zeroed on purpose (all singular values
    at round-off level) from being judged relative to its own noise.
    """
    A = np.asarray(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > rtol * max(s[0], scale)))


def null_space(A, rank, ncols=None):
    """Orthonormal basis of the null space of ``A`` assuming ``rank(A) = rank``.

    Returns the trailing right singular vectors; columns are unit norm.
    """
    A = np.asarray(A, dtype=np.complex128)
    n = A.shape[1] if ncols is None else ncols
    if A.shape[0] == 0 or rank == 0:
        return np.eye(n, dtype=np.complex128)
    _, _, Vh = np.linalg.svd(A, full_matrices=True)
    return Vh[rank:].conj().T


def nuclear_norm(A):
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(A, compute_uv=False)))


def rank_one_stack(G, D):
    """Matrix whose column ``r`` is ``vec(outer(G[:, r], D[r, :]))`` (row-major)."""
    N, r = G.shape
    M = D.shape[1]
    return np.einsum("kr,rl->klr", G, D).reshape(N * M, r)
