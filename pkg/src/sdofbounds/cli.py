"""Command-line front end.

Subcommands::

    bounds     lower/upper/benchmark sweep over R for one antenna tuple
    figure     the same sweep for all sixteen reference tuples, plus a manifest
    verify     end-to-end certification of the achievable scheme
    symmetric  closed-form vs enumeration for symmetric configurations
    minrank    rank minimization of one cascaded link

Exit codes: 0 success, 1 invalid input, 2 certification failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidConfig, SdofError
from .lower_bound import (
    balancing_feasible,
    benchmark_prior,
    closed_form_symmetric,
    solve_p0,
)
from .model import AntennaConfig, load_channels, synthesize_channels
from .scheme import ATTEMPTS, certify, report_to_dict, solution_to_dict, verify_solution
from .upper_bound import (
    RankMinParams,
    min_rank,
    min_rank_constructive,
    min_rank_nuclear,
    rankmin_to_dict,
    upper_bound,
)

log = logging.getLogger("sdofbounds")

EXIT_OK, EXIT_INVALID, EXIT_CERT, EXIT_IO = 0, 1, 2, 3

FIGURE_CONFIGS = (
    (2, 2, 2, 2, 2), (2, 2, 4, 4, 2), (2, 2, 5, 5, 2), (2, 2, 5, 5, 5),
    (5, 5, 2, 2, 2), (5, 5, 2, 2, 5), (5, 5, 3, 3, 3), (5, 5, 5, 5, 5),
    (5, 2, 5, 2, 2), (5, 2, 5, 5, 2), (5, 4, 2, 2, 3), (5, 4, 2, 3, 3),
    (5, 4, 3, 2, 2), (5, 4, 3, 3, 3), (5, 4, 4, 2, 2), (5, 5, 2, 5, 5),
)

BOUNDS_HEADER = ("R", "lower", "upper", "benchmark", "branch", "D12", "D21", "De")
SYMMETRIC_HEADER = ("R", "closed_form", "enumeration", "balancing_feasible", "delta")

# sweeps run on freshly synthesized (generic) channels
SWEEP_PARAMS = RankMinParams(assume_generic=True)


class CertificationFailure(SdofError):
    pass


@dataclass(frozen=True)
class SweepRow:
    R: int
    lower: int
    upper: int
    benchmark: int
    branch: str
    D12: int | None
    D21: int | None
    De: int | None
    at_R_prime: bool
    at_R_double_prime: bool

    def csv_fields(self):
        def cell(v):
            return "" if v is None else str(v)

        return [cell(getattr(self, name)) for name in BOUNDS_HEADER]


# -- parsing -------------------------------------------------------------------

_KEYS = ("M1", "M2", "N1", "N2", "Ne")


def parse_config(text, keys=_KEYS):
    """``"M1,M2,N1,N2,Ne"`` or a path to a JSON object/list with those values."""
    path = Path(text)
    if path.suffix == ".json" or path.is_file():
        obj = json.loads(path.read_text())
        if isinstance(obj, dict):
            obj = obj.get("config", obj)
            values = [obj[k] for k in keys]
        else:
            values = list(obj)
    else:
        try:
            values = [int(v) for v in text.split(",")]
        except ValueError:
            raise InvalidConfig("config", text, "expected comma-separated integers") from None
    if len(values) != len(keys):
        raise InvalidConfig("config", text, f"expected {len(keys)} values {','.join(keys)}")
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in values):
        raise InvalidConfig("config", text, "values must be integers")
    return tuple(values)


def params_from_args(args, base=SWEEP_PARAMS):
    return replace(
        base,
        restarts=args.restarts if args.restarts is not None else base.restarts,
        iters=args.iters if args.iters is not None else base.iters,
        seed=args.seed,
        assume_generic=base.assume_generic and not getattr(args, "no_generic_shortcut", False),
    )


# -- sweeps --------------------------------------------------------------------

def sweep_row(cfg, seed, params):
    ch = synthesize_channels(cfg, seed)
    ub = upper_bound(cfg, ch, params)
    return SweepRow(
        R=cfg.R,
        lower=solve_p0(cfg).t_star,
        upper=ub.value,
        benchmark=benchmark_prior(cfg),
        branch=ub.branch,
        D12=ub.D12,
        D21=ub.D21,
        De=ub.De,
        at_R_prime=cfg.R == cfg.leakage_budget(),
        at_R_double_prime=cfg.R == cfg.full_budget(),
    )


def check_row(antennas, row):
    if not row.benchmark <= row.lower <= row.upper:
        raise CertificationFailure(
            f"{antennas} R={row.R}: ordering violated "
            f"(benchmark={row.benchmark}, lower={row.lower}, upper={row.upper})"
        )


def sweep(antennas, R_max=None, seed=0, params=SWEEP_PARAMS):
    """One :class:`SweepRow` per ``R`` in ``[0, R_max]``, invariants enforced."""
    base = AntennaConfig(*antennas)
    R_max = base.full_budget() + 4 if R_max is None else R_max
    if R_max < 0:
        raise InvalidConfig("R_max", R_max, "must be >= 0")
    rows = []
    for R in range(R_max + 1):
        row = sweep_row(base.with_ris(R), seed, params)
        check_row(antennas, row)
        rows.append(row)
    return rows


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BOUNDS_HEADER)
    for row in rows:
        w.writerow(row.csv_fields())
    return buf.getvalue()


def symmetric_rows(M, N, Ne, R_max=None):
    cfg = AntennaConfig(M, M, N, N, Ne)
    R_max = cfg.full_budget() if R_max is None else R_max
    rows = []
    for R in range(R_max + 1):
        closed = closed_form_symmetric(M, N, Ne, R)
        enum = solve_p0(cfg.with_ris(R)).t_star
        rows.append((R, closed, enum, balancing_feasible(M, N, Ne, R), enum - closed))
    return rows


def symmetric_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SYMMETRIC_HEADER)
    for R, closed, enum, feasible, delta in rows:
        w.writerow([R, closed, enum, "true" if feasible else "false", delta])
    return buf.getvalue()


def panel_name(antennas):
    return "bounds_" + "_".join(map(str, antennas)) + ".csv"


def _panel(job):
    antennas, seed, params = job
    return rows_to_csv(sweep(antennas, None, seed, params))


def run_figure(out_dir, seed=0, params=SWEEP_PARAMS, configs=FIGURE_CONFIGS, jobs=1):
    """Write one CSV per panel and ``manifest.json`` into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    work = [(tuple(c), seed, params) for c in configs]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            texts = list(pool.map(_panel, work))
    else:
        texts = [_panel(w) for w in work]
    paths = []
    for antennas, text in zip(configs, texts):
        path = out_dir / panel_name(antennas)
        path.write_text(text)
        paths.append(path)
    manifest = {
        "configs": [list(c) for c in configs],
        "seed": seed,
        "params": asdict(params),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "files": [p.name for p in paths],
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return paths


def read_manifest(path):
    obj = json.loads(Path(path).read_text())
    return [tuple(c) for c in obj["configs"]], obj["seed"], RankMinParams(**obj["params"])


# -- verification --------------------------------------------------------------

def _inject_fault(sol, seed):
    # one extra random stream at Tx1: breaks the stream count and, with an
    # eavesdropper present, the leakage check
    rng = np.random.default_rng(seed)
    extra = rng.standard_normal((sol.P1.shape[0], 1)) + 1j * rng.standard_normal((sol.P1.shape[0], 1))
    return replace(sol, P1=np.hstack([sol.P1, extra]), delta1=sol.delta1 + 1)


def verify_config(antennas, R, seed, attempts=ATTEMPTS, inject_fault=False, channels=None):
    cfg = AntennaConfig(*antennas, R)
    ch = synthesize_channels(cfg, seed) if channels is None else channels
    sol, report, results = certify(ch, cfg, attempts=attempts)
    if inject_fault:
        sol = _inject_fault(sol, seed)
        report = verify_solution(ch, cfg, sol, t_star=report.t_star)
    out = {
        "config": cfg.to_dict(),
        "seed": seed,
        "t_star": report.t_star,
        "achieved_sum": report.achieved_sum,
        "passed": report.passed,
        "failures": list(report.failures),
        "attempt": sol.attempt,
        "report": report_to_dict(report),
        "attempts": {tag: report_to_dict(rep) for tag, (_, rep) in results.items()},
        "solution": solution_to_dict(sol),
    }
    return out


# -- commands ------------------------------------------------------------------

def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_bounds(args):
    antennas = parse_config(args.config)
    rows = sweep(antennas, args.rmax, args.seed, params_from_args(args))
    _emit(rows_to_csv(rows), args.out)
    return EXIT_OK


def cmd_figure(args):
    if args.manifest:
        configs, seed, params = read_manifest(args.manifest)
    else:
        configs, seed, params = FIGURE_CONFIGS, args.seed, params_from_args(args)
    paths = run_figure(args.out, seed, params, configs, args.jobs)
    for p in paths:
        log.info("wrote %s", p)
    return EXIT_OK


def cmd_verify(args):
    antennas = parse_config(args.config)
    channels = load_channels(args.channels) if args.channels else None
    if channels is not None and channels.config.antennas != antennas:
        raise InvalidConfig("channels", args.channels, "antenna counts differ from --config")
    R = channels.config.R if channels is not None else args.ris
    attempts = tuple(args.attempts.split(","))
    bad = [a for a in attempts if a not in ATTEMPTS]
    if bad:
        raise InvalidConfig("attempts", args.attempts, f"unknown attempt(s) {bad}")
    out = verify_config(antennas, R, args.seed, attempts, args.inject_fault, channels)
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    if not out["passed"]:
        print("certification failed: " + ", ".join(out["failures"]), file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def cmd_symmetric(args):
    M, N, Ne = parse_config(args.config, ("M", "N", "Ne"))
    AntennaConfig(M, M, N, N, Ne)
    _emit(symmetric_csv(symmetric_rows(M, N, Ne, args.rmax)), args.out)
    return EXIT_OK


_LINK_ARGS = {
    "12": lambda ch, r: (ch.H12, ch.G1[:, :r], ch.D2[:r]),
    "21": lambda ch, r: (ch.H21, ch.G2[:, :r], ch.D1[:r]),
    "e": lambda ch, r: (np.hstack([ch.He1, ch.He2]), ch.Ge[:, :r], np.hstack([ch.D1, ch.D2])[:r]),
}


def cmd_minrank(args):
    cfg = AntennaConfig(*parse_config(args.config), args.ris)
    ch = synthesize_channels(cfg, args.seed)
    H, G, D = _LINK_ARGS[args.link](ch, cfg.R)
    params = params_from_args(args, RankMinParams())
    if args.method == "nuclear":
        res = min_rank_nuclear(H, G, D, params.restarts, params.iters, params.thresh, params.seed)
    elif args.method == "constructive":
        res = min_rank_constructive(H, G, D, params.thresh)
    else:
        res = min_rank(H, G, D, params)
    out = {"config": cfg.to_dict(), "seed": args.seed, "link": args.link, **rankmin_to_dict(res)}
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="sdofbounds", description="Secure DoF bounds for RIS-assisted MIMO wiretap ICs.")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def solver_flags(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--restarts", type=int)
        sp.add_argument("--iters", type=int)
        sp.add_argument("--no-generic-shortcut", action="store_true",
                        help="always run the nuclear-norm stage")

    sp = sub.add_parser("bounds", help="R-sweep for one configuration")
    sp.add_argument("--config", required=True, help="M1,M2,N1,N2,Ne or JSON file")
    sp.add_argument("--rmax", type=int, help="largest R (default full budget + 4)")
    sp.add_argument("--out")
    solver_flags(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("figure", help="all reference panels")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--manifest", help="rerun from an existing manifest.json")
    sp.add_argument("--jobs", type=int, default=1)
    solver_flags(sp)
    sp.set_defaults(func=cmd_figure)

    sp = sub.add_parser("verify", help="certify the achievable scheme")
    sp.add_argument("--config", required=True)
    sp.add_argument("--ris", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--channels", help="JSON channel file instead of synthesized channels")
    sp.add_argument("--attempts", default=",".join(ATTEMPTS))
    sp.add_argument("--inject-fault", action="store_true", help="negative control")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("symmetric", help="closed form vs enumeration, M1=M2, N1=N2")
    sp.add_argument("--config", required=True, help="M,N,Ne")
    sp.add_argument("--rmax", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_symmetric)

    sp = sub.add_parser("minrank", help="minimize the rank of one cascaded link")
    sp.add_argument("--config", required=True)
    sp.add_argument("--ris", type=int, default=0)
    sp.add_argument("--link", choices=sorted(_LINK_ARGS), default="e")
    sp.add_argument("--method", choices=("combined", "nuclear", "constructive"), default="combined")
    sp.add_argument("--out")
    solver_flags(sp)
    sp.set_defaults(func=cmd_minrank)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CertificationFailure as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    except (InvalidConfig, TypeError, ValueError, KeyError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SdofError as exc:
        print(f"certification failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CERT
