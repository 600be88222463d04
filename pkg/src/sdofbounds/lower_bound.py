"""Sum-SDoF lower bound: the integer program over RIS elimination counts.

A plan ``(f_e1, f_e2, f_12, f_21)`` says how many rows/columns of each
leakage and cross-interference matrix the RIS zeroes.  Each count lowers the
corresponding matrix rank by one and costs ``max(rows, cols)`` RIS elements.
The programs here are tiny (at most a few thousand plans), so they are
solved exactly by enumeration, cached per antenna tuple;
:func:`solve_p0_bnb` is an independent branch-and-bound path kept for
cross-checking.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import astuple, dataclass

import numpy as np

from .errors import PlanOutOfBounds
from .model import AntennaConfig, validate_config

__all__ = [
    "EliminationPlan",
    "RankProfile",
    "LowerBoundResult",
    "plan_limits",
    "ranks_after_elimination",
    "ris_cost",
    "p0_objective",
    "iter_plans",
    "solve_p0",
    "solve_p0_bnb",
    "stream_split",
    "closed_form_symmetric",
    "balancing_solution",
    "balancing_feasible",
    "solve_p0_no_eve",
    "benchmark_prior",
]


@dataclass(frozen=True, order=True)
class EliminationPlan:
    f_e1: int = 0
    f_e2: int = 0
    f_12: int = 0
    f_21: int = 0

    def as_tuple(self):
        return astuple(self)


@dataclass(frozen=True)
class RankProfile:
    De1: int
    De2: int
    D12: int
    D21: int

    def as_tuple(self):
        return astuple(self)


@dataclass(frozen=True)
class LowerBoundResult:
    t_star: int
    plan_star: EliminationPlan
    ranks: RankProfile
    delta1: int
    delta2: int


def plan_limits(cfg):
    """Largest meaningful value of each elimination count (full rank removal)."""
    M1, M2, N1, N2, Ne = cfg.antennas
    return (min(Ne, M1), min(Ne, M2), min(N1, M2), min(N2, M1))


def _costs(cfg):
    M1, M2, N1, N2, Ne = cfg.antennas
    return (max(Ne, M1), max(Ne, M2), max(N1, M2), max(N2, M1))


def ranks_after_elimination(cfg, plan):
    """Ranks of the leakage and cross links after applying ``plan``."""
    limits = plan_limits(cfg)
    values = plan.as_tuple()
    for name, f, lim in zip(("f_e1", "f_e2", "f_12", "f_21"), values, limits):
        if not 0 <= f <= lim:
            raise PlanOutOfBounds(f"{name}={f} outside [0, {lim}] for {cfg}")
    return RankProfile(*(lim - f for lim, f in zip(limits, values)))


def ris_cost(cfg, plan):
    """Number of RIS elements (linear equations) consumed by ``plan``."""
    return sum(f * c for f, c in zip(plan.as_tuple(), _costs(cfg)))


def _objective_terms(cfg, ranks):
    M1, M2, N1, N2, _ = cfg.antennas
    De1, De2, D12, D21 = ranks.as_tuple()
    return (
        N2 - D21 + M1 - De1,
        M2 - D12 + N1 - De2,
        min(N1, M1 - De1) + min(N2, M2 - De2),
    )


def p0_objective(cfg, ranks):
    """Secure sum-DoF achieved by the scheme for the given ranks, floored at 0."""
    return max(0, min(_objective_terms(cfg, ranks)))


def iter_plans(cfg, fixed=None):
    """All plans within the per-variable limits; ``fixed`` pins some counts."""
    fixed = fixed or {}
    names = ("f_e1", "f_e2", "f_12", "f_21")
    ranges = [
        [fixed[n]] if n in fixed else range(lim + 1) for n, lim in zip(names, plan_limits(cfg))
    ]
    for values in itertools.product(*ranges):
        yield EliminationPlan(*values)


def stream_split(cfg, ranks, t):
    """Split ``t`` streams with Tx1 taking as many as it can carry securely."""
    delta1 = min(cfg.N1, cfg.M1 - ranks.De1, t)
    return delta1, t - delta1


def _result(cfg, plan):
    ranks = ranks_after_elimination(cfg, plan)
    t = p0_objective(cfg, ranks)
    return LowerBoundResult(t, plan, ranks, *stream_split(cfg, ranks, t))


@functools.lru_cache(maxsize=1024)
def _plan_table(antennas, fixed):
    # Plans sorted best-first by (objective desc, cost, plan); none of this
    # depends on R, so a sweep over R only has to scan for the first
    # affordable entry.
    cfg = AntennaConfig(*antennas)
    plans = list(iter_plans(cfg, dict(fixed)))
    keys = [
        (-p0_objective(cfg, ranks_after_elimination(cfg, p)), ris_cost(cfg, p), p.as_tuple())
        for p in plans
    ]
    order = sorted(range(len(plans)), key=keys.__getitem__)
    return [plans[i] for i in order], np.array([keys[i][1] for i in order])


def _best_plan(cfg, fixed=None):
    plans, costs = _plan_table(cfg.antennas, tuple(sorted((fixed or {}).items())))
    hits = np.flatnonzero(costs <= cfg.R)
    return plans[hits[0]] if hits.size else None


def solve_p0(cfg):
    """Exact optimum of the lower-bound integer program by enumeration.

    Ties are broken by smallest RIS cost, then lexicographically smallest plan.
    """
    validate_config(cfg)
    return _result(cfg, _best_plan(cfg))


def solve_p0_bnb(cfg):
    """Depth-first branch-and-bound on the same program.

    The objective is non-decreasing in every count, so fixing the free counts
    at their limits (ignoring the budget) bounds any subtree from above.
    Returns only the optimal value.
    """
    validate_config(cfg)
    limits = plan_limits(cfg)
    costs = _costs(cfg)
    best = -1

    def value(values):
        return p0_objective(cfg, ranks_after_elimination(cfg, EliminationPlan(*values)))

    def branch(prefix, budget):
        nonlocal best
        depth = len(prefix)
        if depth == 4:
            best = max(best, value(prefix))
            return
        if value(prefix + list(limits[depth:])) <= best:
            return
        for f in range(min(limits[depth], budget // costs[depth]), -1, -1):
            branch(prefix + [f], budget - f * costs[depth])

    branch([], cfg.R)
    return best


def closed_form_symmetric(M, N, Ne, R):
    """Tabulated lower bound for ``M1 = M2 = M`` and ``N1 = N2 = N``.

    The floor term is clamped at zero and so is the result.  This expression
    is only the program optimum where :func:`balancing_feasible` holds.
    """
    if N <= M and Ne <= M:
        inner = M - Ne + max(0, (R - 2 * (M - Ne) * M) // (4 * M))
    elif N <= M:
        inner = max(0, R // (2 * (Ne + M)))
    elif Ne <= M:
        inner = M - Ne + max(0, (R - 2 * N * (2 * M - Ne - N)) // (2 * (M + N)))
    else:
        inner = max(0, (R - 2 * N * (M - N)) // (2 * (N + Ne)))
    return max(0, 2 * min(inner, N))


def balancing_solution(M, N, Ne, R):
    """Integer ``(f, f_e)`` that balances the symmetric program, or ``None``.

    Balancing equates the interference-limited and transmit-limited stream
    counts while spending exactly half the RIS budget per user.  Solutions
    must respect the rank limits ``f <= min(N, M)`` and ``f_e <= min(Ne, M)``.
    """
    if R % 2:
        return None
    half = R // 2
    for fe in range(min(Ne, M) + 1):
        for f in range(min(N, M) + 1):
            if N <= M and Ne <= M:
                ok = M - Ne + f + fe == 2 * min(N, M - Ne + fe) and (fe + f) * M == half
            elif N <= M:
                ok = f + fe == 2 * min(N, fe) and fe * Ne + f * M == half
            elif Ne <= M:
                ok = N - Ne + f + fe == 2 * min(N, M - Ne + fe) and fe * M + f * N == half
            else:
                ok = N - M + f + fe == 2 * min(N, fe) and fe * Ne + f * N == half
            if ok:
                return f, fe
    return None


def balancing_feasible(M, N, Ne, R):
    return balancing_solution(M, N, Ne, R) is not None


def solve_p0_no_eve(M1, M2, N1, N2, R):
    """Lower bound without an eavesdropper (interference elimination only)."""
    return solve_p0(AntennaConfig(M1, M2, N1, N2, 0, R)).t_star


def benchmark_prior(cfg):
    """Security-gated benchmark: transmit only after all leakage is nulled.

    Zero below the leakage budget; otherwise the program with both leakage
    counts forced to their limits.
    """
    validate_config(cfg)
    if cfg.R < cfg.leakage_budget():
        return 0
    fe1, fe2, _, _ = plan_limits(cfg)
    plan = _best_plan(cfg, {"f_e1": fe1, "f_e2": fe2})
    return _result(cfg, plan).t_star
