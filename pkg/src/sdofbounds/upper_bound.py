"""Sum-SDoF upper bound via rank minimization over the RIS profile.

The bound needs the smallest rank that ``H + G diag(phi) D`` can reach.
:func:`min_rank_nuclear` relaxes rank to the nuclear norm (convex in
``phi`` because the map is affine) and solves it with ADMM from several
random starts; each solution is thresholded at ``1e-3`` (entries, then
singular values) to read off a rank.  Because the nuclear norm is only the
convex envelope of rank, each thresholded solution is then refined by a
Gauss-Newton search for a nearby lower-rank point.
:func:`min_rank_constructive` gives an exact-by-construction certificate by
zeroing whole rows or columns.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ._linalg import nuclear_norm, rank_one_stack
from .errors import IdentityViolation, SingularSystem, SolverDiverged
from .scheme import elimination_equations, solve_elimination

__all__ = [
    "NUCLEAR",
    "CONSTRUCTIVE",
    "RankMinParams",
    "RankMinResult",
    "UpperBoundResult",
    "thresholded_rank",
    "generic_min_rank",
    "min_rank_nuclear",
    "min_rank_constructive",
    "min_rank",
    "ic_upper_case_terms",
    "upper_bound",
    "rankmin_to_dict",
]

log = logging.getLogger(__name__)

NUCLEAR = "nuclear-norm"
CONSTRUCTIVE = "constructive-elimination"
ABOVE = "above"
BELOW = "below"


@dataclass(frozen=True)
class RankMinParams:
    """Solver settings.

    ``restarts`` independent ADMM runs of at most ``iters`` iterations each.
    ``assume_generic`` treats the smallest rank a generic affine family of
    that dimension can reach as a floor: :func:`min_rank` skips the
    nuclear-norm stage when the constructive rank is already there and stops
    restarting once a restart gets there.
    """

    restarts: int = 10
    iters: int = 2000
    thresh: float = 1e-3
    seed: int = 0
    refine: bool = True
    assume_generic: bool = False
    admm_tol: float = 1e-10


@dataclass(frozen=True, eq=False)
class RankMinResult:
    rank: int
    phi: np.ndarray
    method: str
    nuclear_norm_value: float
    restart_objectives: tuple = field(default=())


@dataclass(frozen=True)
class UpperBoundResult:
    value: int
    branch: str
    D12: int | None = None
    D21: int | None = None
    De: int | None = None
    Rbar: int | None = None


def _cascade(H, G, D, phi):
    return H + (G * phi) @ D


def thresholded_rank(X, thresh=1e-3):
    """Rank after zeroing entries, then singular values, below ``thresh``."""
    X = np.array(X, dtype=np.complex128)
    if X.size == 0:
        return 0
    X[np.abs(X) < thresh] = 0
    s = np.linalg.svd(X, compute_uv=False)
    return int(np.sum(s >= thresh))


def generic_min_rank(N, M, r):
    """Smallest ``k`` with ``(N - k)(M - k) <= r``.

    Matrices of rank at most ``k`` form a variety of codimension
    ``(N - k)(M - k)``; a generic ``r``-dimensional affine family cannot reach
    it otherwise.
    """
    k = 0
    while (N - k) * (M - k) > r:
        k += 1
    return k


def _svt(Z, tau):
    U, s, Vh = np.linalg.svd(Z, full_matrices=False)
    return (U * np.maximum(s - tau, 0.0)) @ Vh


def _admm(H, A, A_pinv, phi0, iters, tol):
    """ADMM on ``min ||X||_*  s.t.  X = H + A(phi)`` with residual balancing.

    Returns ``(phi, converged)``.
    """
    N, M = H.shape
    h = H.reshape(-1)
    phi = phi0
    u = np.zeros(N * M, dtype=np.complex128)
    a_phi = A @ phi
    rho = 1.0 / max(np.linalg.norm(H, 2), 1e-12)
    for it in range(iters):
        X = _svt((h + a_phi - u).reshape(N, M), 1.0 / rho).reshape(-1)
        phi = A_pinv @ (X - h + u)
        a_new = A @ phi
        r = X - h - a_new
        s = rho * np.linalg.norm(a_new - a_phi)
        a_phi = a_new
        u = u + r
        nr = np.linalg.norm(r)
        scale = max(np.linalg.norm(X), np.linalg.norm(h + a_phi), 1.0)
        if not np.isfinite(nr):
            return phi, False
        if nr < tol * scale and s < tol * scale:
            return phi, True
        if it % 10 == 9:
            # residual balancing; u is the scaled dual so it rescales with rho
            if nr > 10 * s:
                rho *= 2.0
                u /= 2.0
            elif s > 10 * nr:
                rho /= 2.0
                u *= 2.0
    return phi, bool(nr < 1e-6 * scale)


def _lowrank_fit(H, A, phi, k, L0=None, maxit=100):
    """Levenberg-Marquardt on ``H + A(phi) = L @ Rm`` with ``L`` of width ``k``.

    Starts from the rank-``k`` truncation of the current cascade, or, given a
    column basis ``L0``, from the least-squares ``(phi, Rm)`` for that basis.
    """
    N, M = H.shape
    r = A.shape[1]
    h = H.reshape(-1)
    eye_n, eye_m = np.eye(N), np.eye(M)
    if L0 is None:
        U, s, Vh = np.linalg.svd(h.reshape(N, M) + (A @ phi).reshape(N, M), full_matrices=False)
        L = U[:, :k] * s[:k]
        Rm = Vh[:k].copy()
    else:
        L = L0
        J_R = np.einsum("ac,bd->abcd", L, eye_m).reshape(N * M, k * M)
        x = np.linalg.lstsq(np.hstack([A, -J_R]), -h, rcond=None)[0]
        phi, Rm = x[:r], x[r:].reshape(k, M)
        s = np.linalg.svd(H, compute_uv=False)

    def residual(phi, L, Rm):
        return h + A @ phi - (L @ Rm).reshape(-1)

    F = residual(phi, L, Rm)
    f = np.linalg.norm(F)
    stop = 1e-14 * max(1.0, s[0] if s.size else 1.0)
    lam = 1e-6
    history = [f]
    for _ in range(maxit):
        if f < stop:
            break
        J_L = np.einsum("ad,cb->abdc", eye_n, Rm).reshape(N * M, N * k)
        J_R = np.einsum("ac,bd->abcd", L, eye_m).reshape(N * M, k * M)
        J = np.hstack([A, -J_L, -J_R])
        JhJ = J.conj().T @ J
        g = J.conj().T @ F
        for _ in range(30):
            step = -np.linalg.solve(JhJ + lam * np.eye(JhJ.shape[0]), g)
            phi2 = phi + step[:r]
            L2 = L + step[r:r + N * k].reshape(N, k)
            R2 = Rm + step[r + N * k:].reshape(k, M)
            F2 = residual(phi2, L2, R2)
            f2 = np.linalg.norm(F2)
            if f2 < f:
                phi, L, Rm, F, f = phi2, L2, R2, F2, f2
                lam = max(lam / 10.0, 1e-15)
                break
            lam *= 10.0
        else:
            break
        history.append(f)
        if len(history) > 10 and history[-1] > 0.5 * history[-11]:
            break
    return phi


def _descend(H, G, D, A, phi, rank, thresh, rng):
    """Lower the thresholded rank one step at a time while fits succeed.

    Each step tries the truncated-SVD start first, then one random column
    basis, which escapes the spurious minima the first start sometimes hits.
    """
    N = H.shape[0]
    while rank > 0:
        k = rank - 1
        Z = rng.standard_normal((N, k)) + 1j * rng.standard_normal((N, k))
        for L0 in (None, np.linalg.qr(Z)[0] if k else None):
            cand = _lowrank_fit(H, A, phi, k, L0)
            cand_rank = thresholded_rank(_cascade(H, G, D, cand), thresh)
            if cand_rank < rank:
                break
        if cand_rank >= rank:
            break
        phi, rank = cand, cand_rank
    return phi, rank


def min_rank_nuclear(H, G, D, restarts=10, iters=2000, thresh=1e-3, seed=0, refine=True,
                     tol=1e-10, floor=0):
    """Minimize the rank of ``H + G diag(phi) D`` through its nuclear norm.

    Parameters
    ----------
    H : ndarray, shape (N, M)
    G : ndarray, shape (N, r)
    D : ndarray, shape (r, M)
    restarts : int
        Independent random initializations; the smallest rank wins.
    iters : int
        ADMM iteration cap per restart.
    thresh : float
        Entry and singular-value threshold for reading off the rank.
    refine : bool
        Run the low-rank Gauss-Newton refinement after each convex solve.
    floor : int
        Stop restarting once this rank is reached.

    Returns
    -------
    RankMinResult
        ``restart_objectives`` holds the converged nuclear norm of each
        successful restart (before refinement).

    Raises
    ------
    SolverDiverged
        If no restart converges.
    """
    H = np.asarray(H, dtype=np.complex128)
    G = np.asarray(G, dtype=np.complex128)
    D = np.asarray(D, dtype=np.complex128)
    r = G.shape[1]
    if H.size == 0:
        return RankMinResult(0, np.zeros(r, complex), NUCLEAR, 0.0)
    A = rank_one_stack(G, D)
    if r == 0 or not np.any(A):
        phi = np.zeros(r, complex)
        return RankMinResult(thresholded_rank(H, thresh), phi, NUCLEAR, nuclear_norm(H))
    A_pinv = np.linalg.pinv(A)
    best = None
    objectives = []
    for k in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
        phi0 = (rng.standard_normal(r) + 1j * rng.standard_normal(r)) / np.sqrt(2.0)
        phi, ok = _admm(H, A, A_pinv, phi0, iters, tol)
        if not ok:
            log.warning("nuclear-norm restart %d did not converge", k)
            continue
        objectives.append(nuclear_norm(_cascade(H, G, D, phi)))
        rank = thresholded_rank(_cascade(H, G, D, phi), thresh)
        if refine and rank > 0:
            # the convex point is the same for every restart; the random start
            # gives the local refinement a second, restart-specific basin
            phi, rank = _descend(H, G, D, A, phi, rank, thresh, rng)
            start_rank = thresholded_rank(_cascade(H, G, D, phi0), thresh)
            alt, alt_rank = _descend(H, G, D, A, phi0, start_rank, thresh, rng)
            if alt_rank < rank:
                phi, rank = alt, alt_rank
        if best is None or rank < best[0]:
            best = (rank, phi)
        if rank <= floor:
            break
    if best is None:
        raise SolverDiverged(f"all {restarts} nuclear-norm restarts failed")
    rank, phi = best
    return RankMinResult(rank, phi, NUCLEAR, nuclear_norm(_cascade(H, G, D, phi)),
                         tuple(objectives))


def min_rank_constructive(H, G, D, thresh=1e-3):
    """Zero ``floor(r / max(N, M))`` whole rows (or columns) of the cascade.

    Falls back to fewer eliminations if the linear system is singular, which
    only happens for degenerate inputs such as ``G = 0``.
    """
    H = np.asarray(H, dtype=np.complex128)
    G = np.asarray(G, dtype=np.complex128)
    D = np.asarray(D, dtype=np.complex128)
    N, M = H.shape
    r = G.shape[1]
    if H.size == 0:
        return RankMinResult(0, np.zeros(r, complex), CONSTRUCTIVE, 0.0)
    f_max = min(r // max(N, M), min(N, M))
    for f in range(f_max, -1, -1):
        try:
            phi = solve_elimination([elimination_equations(H, G, D, f)], r)
        except SingularSystem:
            continue
        X = _cascade(H, G, D, phi)
        return RankMinResult(thresholded_rank(X, thresh), phi, CONSTRUCTIVE, nuclear_norm(X))
    raise AssertionError("unreachable: f = 0 always solves")


def min_rank(H, G, D, params=None):
    """Better of :func:`min_rank_nuclear` and :func:`min_rank_constructive`.

    Ties go to the constructive result.
    """
    params = params or RankMinParams()
    cons = min_rank_constructive(H, G, D, params.thresh)
    if cons.rank == 0:
        return cons
    floor = generic_min_rank(*np.shape(H), np.shape(G)[1]) if params.assume_generic else 0
    if cons.rank <= floor:
        return cons
    nuc = min_rank_nuclear(H, G, D, params.restarts, params.iters, params.thresh, params.seed,
                           params.refine, params.admm_tol, floor)
    return nuc if nuc.rank < cons.rank else cons


def ic_upper_case_terms(M1, M2, N1, N2, D12, D21):
    """Two-user IC linear sum-DoF bound, evaluated case by case and in closed form.

    The case expansion sums the generic ranks of ``[H11 H12]`` and
    ``[H12; H22]`` (and the mirrored pair) minus the cross rank; the closed
    form is ``min{M1+M2, N1+N2, M1+N2-D21, M2+N1-D12}``.

    Raises
    ------
    IdentityViolation
        If the two evaluations disagree.
    """
    if not (0 <= D12 <= min(N1, M2) and 0 <= D21 <= min(N2, M1)):
        raise ValueError(f"ranks D12={D12}, D21={D21} out of range")
    if N1 <= M2:
        rx1 = min(N1, M1 + M2) + min(M2, D12 + N2) - D12
    else:
        rx1 = min(N1, M1 + D12) + min(M2, N1 + N2) - D12
    if N2 <= M1:
        rx2 = min(N2, M1 + M2) + min(M1, D21 + N1) - D21
    else:
        rx2 = min(N2, M2 + D21) + min(M1, N1 + N2) - D21
    by_cases = min(rx1, rx2, M1 + M2, N1 + N2)
    closed = min(M1 + M2, N1 + N2, M1 + N2 - D21, M2 + N1 - D12)
    if by_cases != closed:
        raise IdentityViolation(
            f"case expansion {by_cases} != closed form {closed} for "
            f"{(M1, M2, N1, N2, D12, D21)}"
        )
    return closed


def upper_bound(cfg, ch, params=None):
    """Upper bound on the secure sum-DoF for the channels ``ch``.

    Above the leakage budget the first ``R - (M1+M2)Ne`` RIS elements are
    spent on each cross link independently; otherwise all ``R`` elements
    minimize the rank of the joint leakage matrix ``[He1 He2]``.
    """
    M1, M2, N1, N2, _ = cfg.antennas
    budget = cfg.leakage_budget()
    if cfg.R > budget:
        Rbar = cfg.R - budget
        r21 = min_rank(ch.H21, ch.G2[:, :Rbar], ch.D1[:Rbar, :], params)
        r12 = min_rank(ch.H12, ch.G1[:, :Rbar], ch.D2[:Rbar, :], params)
        value = ic_upper_case_terms(M1, M2, N1, N2, r12.rank, r21.rank)
        return UpperBoundResult(value, ABOVE, D12=r12.rank, D21=r21.rank, Rbar=Rbar)
    leak = min_rank(np.hstack([ch.He1, ch.He2]), ch.Ge, np.hstack([ch.D1, ch.D2]), params)
    De = leak.rank
    value = max(0, min(M1 + M2 - De, N1 + N2, max(M1, N2), max(M2, N1)))
    return UpperBoundResult(value, BELOW, De=De)


def rankmin_to_dict(res):
    from .model import complex_to_pairs

    return {
        "rank": res.rank,
        "method": res.method,
        "nuclear_norm_value": res.nuclear_norm_value,
        "restart_objectives": list(res.restart_objectives),
        "phi": complex_to_pairs(res.phi),
    }
