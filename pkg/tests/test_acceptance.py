"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines are
collected at the end of the pytest report.
"""

import itertools

import numpy as np
import pytest

from oracles import crandn, det_root, p0_no_eve
from sdofbounds.cli import (
    FIGURE_CONFIGS,
    SWEEP_PARAMS,
    read_manifest,
    run_figure,
    sweep_row,
    verify_config,
)
from sdofbounds.errors import IdentityViolation
from sdofbounds.lower_bound import (
    balancing_feasible,
    closed_form_symmetric,
    iter_plans,
    ris_cost,
    solve_p0,
    solve_p0_no_eve,
)
from sdofbounds.model import AntennaConfig, synthesize_channels
from sdofbounds.scheme import RESIDUAL_TOL, build_phi, rank_realization_check
from sdofbounds.upper_bound import (
    RankMinParams,
    ic_upper_case_terms,
    min_rank,
    min_rank_nuclear,
    thresholded_rank,
)


@pytest.fixture(scope="module")
def grid_rows():
    """Every panel row for R in [0, R'' + 4], without emission-time checks."""
    rows = {}
    for antennas in FIGURE_CONFIGS:
        base = AntennaConfig(*antennas)
        rows[antennas] = [
            sweep_row(base.with_ris(R), 0, SWEEP_PARAMS) for R in range(base.full_budget() + 5)
        ]
    return rows


def test_criterion_01_saturation(grid_rows, criterion):
    bad = []
    for antennas, rows in grid_rows.items():
        M1, M2, N1, N2, _ = antennas
        cap = min(M1, N1) + min(M2, N2)
        full = AntennaConfig(*antennas).full_budget()
        bad += [(antennas, r.R) for r in rows if r.R >= full and not r.lower == r.upper == cap]
    criterion(1, "saturation lower = upper = min(M1,N1)+min(M2,N2) for R >= R''", not bad,
              f"{len(bad)} violations" if bad else "16 panels")


def test_criterion_02_sandwich(grid_rows, criterion):
    order, gate = [], []
    for antennas, rows in grid_rows.items():
        leak = AntennaConfig(*antennas).leakage_budget()
        order += [(antennas, r.R) for r in rows if not r.benchmark <= r.lower <= r.upper]
        gate += [(antennas, r.R) for r in rows if r.R < leak and r.benchmark != 0]
    n = sum(len(r) for r in grid_rows.values())
    criterion(2, "benchmark <= lower <= upper, benchmark = 0 below R'", not order and not gate,
              f"{n} rows, {len(order)} ordering and {len(gate)} gate violations")


def test_criterion_03_alignment(grid_rows, criterion):
    bad = []
    for antennas, rows in grid_rows.items():
        leak = AntennaConfig(*antennas).leakage_budget()
        bad += [(antennas, r.R) for r in rows if r.R > leak and r.lower != r.benchmark]
    criterion(3, "lower = benchmark for R > R'", not bad, f"counterexamples {bad[:5]}" if bad else "")


def test_criterion_04_closed_form(criterion):
    mismatches, feasible, max_dev, worst = [], 0, 0, None
    for M, N, Ne in itertools.product(range(1, 7), repeat=3):
        base = AntennaConfig(M, M, N, N, Ne)
        for R in range(base.full_budget() + 1):
            closed = closed_form_symmetric(M, N, Ne, R)
            enum = solve_p0(base.with_ris(R)).t_star
            if balancing_feasible(M, N, Ne, R):
                feasible += 1
                if closed != enum:
                    mismatches.append((M, N, Ne, R))
            elif abs(closed - enum) > max_dev:
                max_dev, worst = abs(closed - enum), (M, N, Ne, R, closed, enum)
    gaps = (
        closed_form_symmetric(2, 2, 2, 4) == 0 and solve_p0(AntennaConfig(2, 2, 2, 2, 2, 4)).t_star == 1
        and closed_form_symmetric(2, 5, 5, 10) == 4
        and solve_p0(AntennaConfig(2, 2, 5, 5, 5, 10)).t_star == 2
    )
    print(f"closed form: max |deviation| off the balancing set = {max_dev} at {worst}")
    criterion(4, "closed form = enumeration on balancing-feasible points; gap cases reproduced",
              not mismatches and gaps,
              f"{feasible} feasible points, {len(mismatches)} mismatches, max off-set deviation {max_dev}")


def test_criterion_05_no_eve(criterion):
    bad, n = [], 0
    for M1, M2, N1, N2 in itertools.product(range(1, 7), repeat=4):
        base = AntennaConfig(M1, M2, N1, N2, 0)
        for R in range(M1 * N2 + M2 * N1 + 1):
            n += 1
            t = solve_p0(base.with_ris(R)).t_star
            # the oracle is an independent two-variable enumeration
            if not t == solve_p0_no_eve(M1, M2, N1, N2, R) == p0_no_eve(M1, M2, N1, N2, R):
                bad.append((M1, M2, N1, N2, R))
    criterion(5, "Ne = 0 reduces to the interference-only program", not bad, f"{n} points")


def test_criterion_06_certification(criterion):
    fails, n = [], 0
    for antennas in FIGURE_CONFIGS:
        base = AntennaConfig(*antennas)
        for R in (0, base.leakage_budget(), base.full_budget()):
            for seed in range(100):
                n += 1
                out = verify_config(antennas, R, seed)
                rep = out["report"]
                ok = (
                    out["passed"]
                    and rep["leakage1"] <= RESIDUAL_TOL and rep["leakage2"] <= RESIDUAL_TOL
                    and rep["decodable1"] and rep["decodable2"]
                    and rep["achieved_sum"] == rep["t_star"]
                )
                if not ok:
                    fails.append((antennas, R, seed, out["failures"]))
    criterion(6, "scheme certification at R in {0, R', R''} x 100 seeds", not fails,
              f"{n - len(fails)}/{n} pass")


def test_criterion_07_rank_realization(criterion):
    rng = np.random.default_rng(2024)
    done, bad = 0, []
    while done < 50:
        antennas = tuple(int(v) for v in rng.integers(1, 6, 4)) + (int(rng.integers(0, 5)),)
        base = AntennaConfig(*antennas)
        cfg = base.with_ris(int(rng.integers(0, base.full_budget() + 1)))
        plans = [p for p in iter_plans(cfg) if ris_cost(cfg, p) <= cfg.R]
        plan = plans[int(rng.integers(len(plans)))]
        seed = int(rng.integers(10**6))
        ch = synthesize_channels(cfg, seed)
        try:
            rank_realization_check(ch, cfg, plan, build_phi(ch, cfg, plan))
        except Exception as exc:  # any failure counts against the criterion
            bad.append((cfg, plan.as_tuple(), seed, repr(exc)))
        done += 1
    criterion(7, "measured ranks equal limit - f for 50 random plans", not bad, f"{50 - len(bad)}/50")


def _recascade(H, G, D, phi):
    return H + (G * phi) @ D


def test_criterion_08_rank_oracles(criterion):
    rng = np.random.default_rng(8)
    cancel_bad = []
    for _ in range(20):
        N, M, r = (int(v) for v in rng.integers(1, 5, 3))
        G, D = crandn(rng, N, r), crandn(rng, r, M)
        H = -_recascade(np.zeros((N, M)), G, D, crandn(rng, r))
        res = min_rank_nuclear(H, G, D)
        if res.rank != 0 or res.nuclear_norm_value > 1e-6:
            cancel_bad.append((N, M, r, res.rank, res.nuclear_norm_value))

    det_bad = []
    for _ in range(50):
        H, g, d = crandn(rng, 2, 2), crandn(rng, 2, 1), crandn(rng, 1, 2)
        res = min_rank_nuclear(H, g, d)
        smin = np.linalg.svd(_recascade(H, g, d, res.phi), compute_uv=False)[-1]
        star = det_root(H, g[:, 0], d[0])
        if res.rank != 1 or smin > 1e-6 or abs(res.phi[0] - star) > 1e-6 * max(1.0, abs(star)):
            det_bad.append((res.rank, smin))

    cap_bad = []
    params = RankMinParams(restarts=4)
    for _ in range(60):
        N, M = (int(v) for v in rng.integers(1, 5, 2))
        r = int(rng.integers(0, N * M + 2))
        H, G, D = crandn(rng, N, M), crandn(rng, N, r), crandn(rng, r, M)
        res = min_rank(H, G, D, params)
        cap = max(0, min(N, M) - r // max(N, M))
        if res.rank > cap or thresholded_rank(_recascade(H, G, D, res.phi)) != res.rank:
            cap_bad.append((N, M, r, res.rank, cap))
    criterion(8, "rank oracles: cancellation, determinant root, constructive cap",
              not (cancel_bad or det_bad or cap_bad),
              f"failures a={len(cancel_bad)}/20 b={len(det_bad)}/50 c={len(cap_bad)}/60")


def test_criterion_09_ic_identity(criterion):
    n, bad = 0, []
    for M1, M2, N1, N2 in itertools.product(range(1, 7), repeat=4):
        for D12 in range(min(N1, M2) + 1):
            for D21 in range(min(N2, M1) + 1):
                n += 1
                try:
                    ic_upper_case_terms(M1, M2, N1, N2, D12, D21)
                except IdentityViolation as exc:
                    bad.append(str(exc))
    criterion(9, "case expansion equals closed min form", not bad, f"{n} tuples")


def test_criterion_10_determinism(tmp_path, criterion):
    first = run_figure(tmp_path / "a")
    configs, seed, params = read_manifest(tmp_path / "a" / "manifest.json")
    second = run_figure(tmp_path / "b", seed, params, configs)
    same = len(first) == len(second) == 16 and all(
        p.read_bytes() == q.read_bytes() for p, q in zip(first, second)
    )
    criterion(10, "figure rerun from manifest is byte-identical", same, f"{len(first)} CSVs")
