"""Constructive certification of the lower-bound transmission scheme.

Three stages, all at the matrix level:

1. :func:`build_phi` solves one linear system in the RIS profile that zeroes
   the leading rows (or columns) of every leakage/interference link listed
   in an :class:`~sdofbounds.lower_bound.EliminationPlan`.
2. :func:`build_precoders` places every stream in the null space of its
   leakage link and zero-forces the interference directions of the cross
   links (SVD coordinates) that the unintended receiver cannot resolve.
3. :func:`verify_solution` measures leakage, desired-signal rank and
   decodability of the result.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ._linalg import RANK_RTOL, null_space, numerical_rank
from .errors import DegenerateChannels, InfeasiblePlan, RankMismatch, SingularSystem
from .lower_bound import (
    EliminationPlan,
    RankProfile,
    p0_objective,
    ranks_after_elimination,
    ris_cost,
    solve_p0,
)
from .model import cascade, complex_to_pairs, matrix_to_json

__all__ = [
    "ATTEMPTS",
    "PLAN_LINKS",
    "elimination_equations",
    "solve_elimination",
    "build_phi",
    "rank_realization_check",
    "SvdPair",
    "svd_pair",
    "BeamformingSolution",
    "build_precoders",
    "VerificationReport",
    "verify_solution",
    "certify",
    "solution_to_dict",
    "report_to_dict",
]

ZF_ID = "zf-id"
ID_ZF = "id-zf"
ATTEMPTS = (ZF_ID, ID_ZF)

RESIDUAL_TOL = 1e-8

# plan field -> cascaded link it eliminates
PLAN_LINKS = {"f_e1": "e1", "f_e2": "e2", "f_12": "12", "f_21": "21"}


def elimination_equations(H, G, D, count):
    """Linear equations in ``phi`` that zero ``count`` leading rows or columns.

    Rows are zeroed when the link has no more rows than columns, columns
    otherwise.  Entry ``(k, l)`` of ``H + G diag(phi) D`` vanishes iff
    ``sum_r G[k, r] D[r, l] phi_r = -H[k, l]``.

    Returns
    -------
    A : ndarray, shape (n_eq, R)
    b : ndarray, shape (n_eq,)
    """
    N, M = H.shape
    if count == 0:
        return np.zeros((0, G.shape[1]), complex), np.zeros(0, complex)
    if N <= M:
        entries = [(k, l) for k in range(count) for l in range(M)]
    else:
        entries = [(k, l) for l in range(count) for k in range(N)]
    ks = np.array([e[0] for e in entries])
    ls = np.array([e[1] for e in entries])
    A = G[ks, :] * D[:, ls].T
    b = -H[ks, ls]
    return A, b


def solve_elimination(systems, R, tol=RESIDUAL_TOL):
    """Minimum-norm solution of the stacked elimination systems.

    Raises
    ------
    SingularSystem
        If the residual infinity norm exceeds ``tol``.
    """
    systems = [s for s in systems if s[0].shape[0]]
    if not systems:
        return np.zeros(R, dtype=np.complex128)
    A = np.vstack([s[0] for s in systems])
    b = np.concatenate([s[1] for s in systems])
    phi = np.linalg.lstsq(A, b, rcond=None)[0]
    resid = np.max(np.abs(A @ phi - b))
    if not np.isfinite(resid) or resid > tol:
        raise SingularSystem(f"elimination residual {resid:.3e} exceeds {tol:.1e}")
    return phi


def build_phi(ch, cfg, plan):
    """RIS profile realizing ``plan`` on the channels ``ch``."""
    cost = ris_cost(cfg, plan)
    if cost > cfg.R:
        raise InfeasiblePlan(f"plan {plan.as_tuple()} needs {cost} RIS elements, R={cfg.R}")
    ranks_after_elimination(cfg, plan)
    systems = [
        elimination_equations(*ch.link(link), getattr(plan, name))
        for name, link in PLAN_LINKS.items()
    ]
    return solve_elimination(systems, cfg.R)


def rank_realization_check(ch, cfg, plan, phi):
    """Numerical ranks of the leakage and cross links; must match the plan."""
    casc = cascade(ch, phi)
    measured = RankProfile(
        numerical_rank(casc.Hbar_e1),
        numerical_rank(casc.Hbar_e2),
        numerical_rank(casc.Hbar12),
        numerical_rank(casc.Hbar21),
    )
    expected = ranks_after_elimination(cfg, plan)
    if measured != expected:
        raise RankMismatch(f"measured ranks {measured} differ from expected {expected}")
    return measured


@dataclass(frozen=True, eq=False)
class SvdPair:
    """``A = U @ diag(s) @ Vh`` with full unitary ``U`` and ``Vh``."""

    U: np.ndarray
    s: np.ndarray
    Vh: np.ndarray

    def sigma(self):
        S = np.zeros((self.U.shape[0], self.Vh.shape[0]), dtype=np.complex128)
        k = len(self.s)
        S[:k, :k] = np.diag(self.s)
        return S

    def reconstruct(self):
        return self.U @ self.sigma() @ self.Vh


def svd_pair(A):
    U, s, Vh = np.linalg.svd(np.asarray(A, dtype=np.complex128), full_matrices=True)
    return SvdPair(U, s, Vh)


@dataclass(frozen=True, eq=False)
class BeamformingSolution:
    phi: np.ndarray
    P1: np.ndarray
    P2: np.ndarray
    delta1: int
    delta2: int
    attempt: str
    plan: EliminationPlan = field(default_factory=EliminationPlan)
    z1: int = 0
    z2: int = 0

    @property
    def achieved_sum(self):
        return self.delta1 + self.delta2


def _zf_basis(Hbar_e, leak_rank, Vh_cross, z, delta, M):
    """``delta`` orthonormal directions orthogonal to the leakage rows and to
    the top ``z`` right singular vectors of the cross link."""
    if delta <= 0:
        return np.zeros((M, 0), dtype=np.complex128)
    stacked = np.vstack([Hbar_e, Vh_cross[:z]])
    expected = leak_rank + z
    if stacked.shape[0] and numerical_rank(stacked) != expected:
        raise DegenerateChannels(
            f"constraint matrix rank {numerical_rank(stacked)} != expected {expected}"
        )
    basis = null_space(stacked, expected, M)
    if basis.shape[1] < delta:
        raise DegenerateChannels(f"null space of dim {basis.shape[1]} cannot hold {delta} streams")
    return basis[:, :delta]


def _rx1_zf_need(d2, D12, room):
    """Zeros Tx2 must place so Rx1 sees at most ``room`` interference dims."""
    return 0 if min(d2, D12) <= room else max(0, D12 - room)


def _rx2_zf_need(d1, D21, room):
    return 0 if min(d1, D21) <= room else max(0, D21 - room)


def _stream_plan(cfg, ranks, attempt, target):
    """Stream counts and zero-forcing depths ``(delta1, delta2, z1, z2)``."""
    M1, M2, N1, N2, _ = cfg.antennas
    De1, De2, D12, D21 = ranks.as_tuple()
    m1, m2 = M1 - De1, M2 - De2
    d1 = max(0, min(N1, m1, target))
    cap2 = max(0, min(N2, m2, target - d1))
    if attempt == ZF_ID:
        # Tx1 zero-forces with all spare dimensions, Rx2 decodes the rest.
        z1 = min(max(0, m1 - d1), D21)
        q = min(d1, max(0, D21 - z1))
        for d2 in range(min(cap2, N2 - q), -1, -1):
            z2 = _rx1_zf_need(d2, D12, N1 - d1)
            if m2 - z2 >= d2:
                return d1, d2, z1, z2
    elif attempt == ID_ZF:
        # Rx1 decodes up to N1 - delta1 interference dims, Tx2 nulls the rest.
        z2 = min(max(0, D12 - (N1 - d1)), D12)
        for d2 in range(min(cap2, m2 - z2), -1, -1):
            z1 = _rx2_zf_need(d1, D21, N2 - d2)
            if m1 - z1 >= d1:
                return d1, d2, z1, z2
    else:
        raise ValueError(f"unknown attempt {attempt!r}; expected one of {ATTEMPTS}")
    return d1, 0, min(max(0, m1 - d1), D21), 0


def build_precoders(ch, cfg, plan, phi, attempt=ZF_ID, target=None):
    """Precoders for one attempt of the scheme.

    Parameters
    ----------
    attempt : {"zf-id", "id-zf"}
        ``"zf-id"``: Tx1 sends ``min(N1, M1 - De1)`` streams and zero-forces
        toward Rx2 with its spare dimensions; Rx2 decodes the residual
        interference and Tx2 is sized accordingly.  ``"id-zf"``: Rx1 decodes
        up to ``N1 - delta1`` interference dimensions and Tx2 zero-forces the
        remainder.  In both, the other transmitter zero-forces whatever its
        receiver could not otherwise decode.
    target : int, optional
        Total stream count to realize; defaults to the lower-bound objective
        at ``plan``.  Tx1 backs off when the target is below its capacity.
    """
    ranks = ranks_after_elimination(cfg, plan)
    if target is None:
        target = p0_objective(cfg, ranks)
    d1, d2, z1, z2 = _stream_plan(cfg, ranks, attempt, target)
    casc = cascade(ch, phi)
    P1 = _zf_basis(casc.Hbar_e1, ranks.De1, svd_pair(casc.Hbar21).Vh, z1, d1, cfg.M1)
    P2 = _zf_basis(casc.Hbar_e2, ranks.De2, svd_pair(casc.Hbar12).Vh, z2, d2, cfg.M2)
    return BeamformingSolution(np.asarray(phi), P1, P2, d1, d2, attempt, plan, z1, z2)


@dataclass(frozen=True)
class VerificationReport:
    leakage1: float
    leakage2: float
    desired_rank1: int
    desired_rank2: int
    interference_rank1: int
    interference_rank2: int
    decodable1: bool
    decodable2: bool
    achieved_sum: int
    t_star: int
    matches_p0: bool
    tol: float
    failures: tuple = ()

    @property
    def passed(self):
        return not self.failures


def _leakage(Hbar_e, P):
    if P.shape[1] == 0:
        return 0.0
    return float(np.linalg.norm(Hbar_e @ P) / np.linalg.norm(P))


def _decodable(desired, interference, n_rx):
    scale = max(1.0, np.linalg.norm(desired, 2) if desired.size else 0.0,
                np.linalg.norm(interference, 2) if interference.size else 0.0)
    r_int = numerical_rank(interference, scale=scale)
    r_all = numerical_rank(np.hstack([desired, interference]), scale=scale)
    ok = r_all == desired.shape[1] + r_int and r_all <= n_rx
    return ok, r_int


def verify_solution(ch, cfg, sol, tol=RESIDUAL_TOL, t_star=None):
    """Check security, desired rank and decodability of ``sol``."""
    casc = cascade(ch, sol.phi)
    if t_star is None:
        t_star = solve_p0(cfg).t_star
    leak1 = _leakage(casc.Hbar_e1, sol.P1)
    leak2 = _leakage(casc.Hbar_e2, sol.P2)
    y11, y12 = casc.Hbar11 @ sol.P1, casc.Hbar12 @ sol.P2
    y22, y21 = casc.Hbar22 @ sol.P2, casc.Hbar21 @ sol.P1
    rank1 = numerical_rank(y11)
    rank2 = numerical_rank(y22)
    dec1, int1 = _decodable(y11, y12, cfg.N1)
    dec2, int2 = _decodable(y22, y21, cfg.N2)

    failures = []
    if sol.P1.shape != (cfg.M1, sol.delta1) or sol.P2.shape != (cfg.M2, sol.delta2):
        failures.append("shape")
    if leak1 > tol:
        failures.append("leakage1")
    if leak2 > tol:
        failures.append("leakage2")
    if rank1 != sol.delta1:
        failures.append("desired_rank1")
    if rank2 != sol.delta2:
        failures.append("desired_rank2")
    if not dec1:
        failures.append("decodable1")
    if not dec2:
        failures.append("decodable2")
    matches = sol.achieved_sum == t_star
    if not matches:
        failures.append("matches_p0")
    return VerificationReport(
        leak1, leak2, rank1, rank2, int1, int2, dec1, dec2,
        sol.achieved_sum, t_star, matches, tol, tuple(failures),
    )


def certify(ch, cfg, plan=None, attempts=ATTEMPTS):
    """Build and verify every attempt on the optimal (or given) plan.

    Returns ``(best_solution, best_report, all_results)`` where ``all_results``
    maps attempt tag to ``(solution, report)``.  The best attempt carries the
    most streams among passing ones; ties go to the earlier attempt.
    """
    lb = solve_p0(cfg)
    plan = lb.plan_star if plan is None else plan
    phi = build_phi(ch, cfg, plan)
    rank_realization_check(ch, cfg, plan, phi)
    results = {}
    for attempt in attempts:
        sol = build_precoders(ch, cfg, plan, phi, attempt)
        results[attempt] = (sol, verify_solution(ch, cfg, sol, t_star=lb.t_star))
    best = max(
        results.values(),
        key=lambda sr: (sr[1].passed, sr[0].achieved_sum, -attempts.index(sr[0].attempt)),
    )
    return best[0], best[1], results


def solution_to_dict(sol):
    return {
        "attempt": sol.attempt,
        "plan": list(sol.plan.as_tuple()),
        "delta1": sol.delta1,
        "delta2": sol.delta2,
        "z1": sol.z1,
        "z2": sol.z2,
        "phi": complex_to_pairs(sol.phi),
        "P1": matrix_to_json(sol.P1),
        "P2": matrix_to_json(sol.P2),
    }


def report_to_dict(report):
    out = asdict(report)
    out["failures"] = list(report.failures)
    out["passed"] = report.passed
    return out
