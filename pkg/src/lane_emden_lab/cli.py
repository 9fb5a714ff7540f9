"""Command-line front end: ``lel <subcommand> ...``.

Tables are written as CSV (header row, ``\\n`` line ends, numbers with 17
significant digits) or JSON; verdicts and reports are always JSON with a
fixed key order.

Exit status: 0 success, 2 invalid arguments, 3 criterion inapplicable,
4 numerical non-convergence, 5 self-check failure.
"""

from __future__ import annotations

import argparse
import enum
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import asymptotics, core, spectral, stability
from .config import ENV_VAR, load_config
from .cross_sections import lambda1, parse_section
from .errors import ConvergenceError, CriterionInapplicable, DomainError, LaneEmdenError


class ExitStatus(enum.IntEnum):
    OK = 0
    INVALID_ARGUMENTS = 2
    INAPPLICABLE = 3
    NONCONVERGENCE = 4
    SELFCHECK_FAILED = 5


def fmt(x) -> str:
    """Number with 17 significant digits; zero is written ``0``."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if x == 0.0:
        return "0"
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _json_value(x):
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_json_value(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def dumps(obj) -> str:
    return json.dumps(_json_value(obj), indent=2) + "\n"


def write_table(header, rows, fmt_kind: str) -> str:
    if fmt_kind == "json":
        return dumps([dict(zip(header, r)) for r in rows])
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(fmt(v) for v in r) + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands; each returns (text, exit status)
# ---------------------------------------------------------------------------


def cmd_solve(args, cfg):
    sol = core.solve_unit(args.p, cfg.n_solve, rtol=cfg.ivp_rel, atol=cfg.ivp_abs)
    if args.L is not None:
        r = core.rescale_to_length(sol, args.L)
        rows = zip(r.y, r.values, r.derivs)
    else:
        rows = zip(sol.t, sol.u, sol.du)
    return write_table(["t", "u", "du"], list(rows), cfg.format), ExitStatus.OK


def cmd_spectrum(args, cfg):
    q = spectral.Potential.lane_emden(args.p, cfg.n_spectral)
    pairs = spectral.dirichlet_eigs(q, args.k, cfg.n_spectral)
    if args.check:
        for pr in pairs:
            spectral.check_agreement(pr.alpha, spectral.prufer_eig_oracle(q, pr.k), cfg.eig_tol, f"alpha_{pr.k}")
    rows = [(pr.k, pr.alpha) for pr in pairs]
    return write_table(["k", "alpha"], rows, cfg.format), ExitStatus.OK


def _stability_lambda(args):
    if args.lam is not None:
        if args.L is not None or args.section is not None:
            raise DomainError("give either --lambda or --L with --section, not both")
        return args.lam
    if args.L is None or args.section is None:
        raise DomainError("stability needs --lambda, or --L together with --section")
    L = float(args.L)
    if not (math.isfinite(L) and L > 0):
        raise DomainError(f"L must be positive, got {args.L}")
    return L * L * lambda1(parse_section(args.section, *args.dims))


def cmd_stability(args, cfg):
    lam = _stability_lambda(args)
    v = stability.classify(args.p, lam, cfg.marginal_band)
    out = v.as_dict()
    if v.verdict is stability.Verdict.INAPPLICABLE:
        out["explanation"] = (
            "lambda + alpha_1(p) <= 0: the linearized problem may be degenerate "
            "and the boundary-slope criterion is not asserted"
        )
        return dumps(out), ExitStatus.INAPPLICABLE
    return dumps(out), ExitStatus.OK


def cmd_threshold(args, cfg):
    res = stability.threshold_lambda(args.p, points=args.points)
    return dumps(res.as_dict()), ExitStatus.OK


def _phase_row(p, lams):
    pd = stability.phase_diagram([p], lams)
    return [(v.name, s) for v, s in zip(pd.verdicts[0], pd.end_slopes[0])]


def cmd_phase(args, cfg):
    if args.p_steps < 1 or args.lambda_steps < 1:
        raise DomainError("step counts must be at least 1")
    pg = np.linspace(args.p_min, args.p_max, args.p_steps)
    lg = np.linspace(args.lambda_min, args.lambda_max, args.lambda_steps)
    if np.any(np.diff(pg) < 0) or np.any(np.diff(lg) < 0):
        raise DomainError("grid minima must not exceed maxima")
    for p in pg:
        core.check_exponent(p)
    if args.workers > 1 and len(pg) > 1:
        with ProcessPoolExecutor(args.workers) as ex:
            rows = list(ex.map(_phase_row, pg, [lg] * len(pg)))
    else:
        rows = [_phase_row(p, lg) for p in pg]
    table = [
        (float(p), float(lam), verdict, slope)
        for p, row in zip(pg, rows)
        for lam, (verdict, slope) in zip(lg, row)
    ]
    return write_table(["p", "lambda", "verdict", "end_slope"], table, cfg.format), ExitStatus.OK


def cmd_asymptotics(args, cfg):
    if args.regime == "large-p":
        rep = asymptotics.report_large_p(args.p_list, n=cfg.n_spectral)
    else:
        rep = asymptotics.report_near_one(args.p_list, n=cfg.n_spectral)
    return dumps(rep.as_dict()), ExitStatus.OK


def cmd_selfcheck(args, cfg):
    from .selfcheck import format_table, run_selfcheck

    results = run_selfcheck(quick=args.quick)
    ok = all(r.passed for r in results)
    return format_table(results), ExitStatus.OK if ok else ExitStatus.SELFCHECK_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration (flags override the file named by $%s)" % ENV_VAR)
    g.add_argument("--config", help="flat key = value config file")
    g.add_argument("--ivp-abs", type=float)
    g.add_argument("--ivp-rel", type=float)
    g.add_argument("--eig-tol", type=float)
    g.add_argument("--marginal-band", type=float)
    g.add_argument("--n-solve", type=int)
    g.add_argument("--n-spectral", type=int)
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--output", "-o", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="lel",
        description="One-dimensional Lane-Emden solutions, their spectrum and cylinder stability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="sample u_p and u_p' (CSV t,u,du)")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--n", dest="n_solve", type=int)
    s.add_argument("--L", type=float, help="rescale to the interval (0, L)")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("spectrum", parents=[common], help="Dirichlet eigenvalues of the linearized operator")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--no-check", dest="check", action="store_false", help="skip the Prüfer cross-check")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("stability", parents=[common], help="verdict for (p, lambda) or a cylinder")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--L", type=float)
    s.add_argument("--section", choices=("interval", "rectangle", "disk", "custom"))
    s.add_argument("--dims", type=float, nargs="+", default=[1.0], help="section dimensions (or lambda1 for custom)")
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("threshold", parents=[common], help="lambda where the verdict flips")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--points", type=int, default=stability.SCAN_POINTS)
    s.set_defaults(func=cmd_threshold)

    s = sub.add_parser("phase", parents=[common], help="verdict grid (CSV p,lambda,verdict,end_slope)")
    for name in ("p", "lambda"):
        s.add_argument(f"--{name}-min", type=float, required=True)
        s.add_argument(f"--{name}-max", type=float, required=True)
        s.add_argument(f"--{name}-steps", type=int, required=True)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_phase)

    s = sub.add_parser("asymptotics", parents=[common], help="convergence report for one regime")
    s.add_argument("--regime", choices=("large-p", "near-one"), required=True)
    s.add_argument("--p-list", type=float, nargs="+", required=True)
    s.set_defaults(func=cmd_asymptotics)

    s = sub.add_parser("selfcheck", parents=[common], help="run the invariant suite")
    s.add_argument("--quick", action="store_true", help="skip the slower checks")
    s.set_defaults(func=cmd_selfcheck)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ExitStatus.OK if exc.code == 0 else ExitStatus.INVALID_ARGUMENTS
    try:
        cfg = load_config(args.config).merged(
            ivp_abs=args.ivp_abs,
            ivp_rel=args.ivp_rel,
            eig_tol=args.eig_tol,
            marginal_band=args.marginal_band,
            n_solve=args.n_solve,
            n_spectral=args.n_spectral,
            format=args.format,
            output=args.output,
        )
        text, status = args.func(args, cfg)
    except CriterionInapplicable as exc:
        stdout.write(dumps({"verdict": "INAPPLICABLE", "margin": exc.margin, "explanation": str(exc)}))
        return ExitStatus.INAPPLICABLE
    except DomainError as exc:
        stderr.write(f"lel: error: {exc}\n")
        return ExitStatus.INVALID_ARGUMENTS
    except ConvergenceError as exc:
        stderr.write(f"lel: numerical failure: {exc}\n")
        return ExitStatus.NONCONVERGENCE
    except LaneEmdenError as exc:
        stderr.write(f"lel: {exc}\n")
        return exc.exit_code
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return int(status)


def main(argv=None) -> int:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
