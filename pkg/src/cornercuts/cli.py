"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 validation failure (the input is
well formed but, e.g., not maximal lattice-free), 3 verification failure
(a bound check did not hold).
"""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import lb_bounds as lb
from . import ub_bounds as ub
from .gauge import cut
from .geom2d import GeometryError, NotInteriorError, pt, rat
from .grid import THREADS_ENV, default_workers, frange
from .latticefree import ClassificationError, SlopeParams, classify, is_maximal_lattice_free
from .serialize import (
    FormatError,
    dumps,
    instance_from_json,
    lattice_free_to_json,
    load_json,
    num,
    set_from_json,
)

EXIT_OK, EXIT_INPUT, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _axis(spec: str) -> tuple[Fraction, ...]:
    """Either a comma list ``1/2,1,3`` or a range ``lo:hi:step``."""
    try:
        if ":" in spec:
            lo, hi, step = spec.split(":")
            axis = frange(lo, hi, step)
        else:
            axis = tuple(rat(x) for x in spec.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"bad grid {spec!r}: {e}")
    if not axis:
        raise argparse.ArgumentTypeError(f"grid {spec!r} is empty")
    return axis


def _pair(spec: str) -> tuple[Fraction, ...]:
    try:
        return tuple(rat(x) for x in spec.split(","))
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(str(e))


def _fmt(x: Fraction) -> str:
    return str(x)


def _write(path: Optional[str], name: str, text: str) -> None:
    if path is None:
        return
    os.makedirs(path, exist_ok=True)
    with open(os.path.join(path, name), "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if args.format == "json":
        sys.stdout.write(dumps(payload))
    else:
        for line in lines:
            print(line)


# --- classify / cut ----------------------------------------------------------


def cmd_classify(args) -> int:
    body = set_from_json(load_json(args.input))
    if not is_maximal_lattice_free(body):
        _emit(args, {"maximal_lattice_free": False}, ["not maximal lattice-free"])
        return EXIT_INVALID
    c = classify(body)
    label = c.value.replace("triangle-", "triangle ")
    _emit(args, {"maximal_lattice_free": True, "classification": c.value},
          [f"{label}, maximal lattice-free"])
    return EXIT_OK


def cmd_cut(args) -> int:
    body = set_from_json(load_json(args.input))
    inst = instance_from_json(load_json(args.instance))
    try:
        ineq = cut(body, inst)
    except NotInteriorError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    _emit(args, {"coeffs": [num(c) for c in ineq.coeffs], "rhs": num(ineq.rhs)},
          [" ".join(_fmt(c) for c in ineq.coeffs) + " >= 1"])
    return EXIT_OK


# --- verify-ub ---------------------------------------------------------------


def _summary_row(row: Optional[ub.SweepRow]) -> Optional[dict]:
    if row is None:
        return None
    return {k: (getattr(row, k) if k == "case" else num(getattr(row, k))) for k in ub.SWEEP_COLUMNS}


def cmd_verify_ub(args) -> int:
    pg = ub.ParamGrid(args.grid_u or ub.DEFAULT_U, args.grid_v or ub.DEFAULT_V, args.grid_w or ub.DEFAULT_W)
    fq = ub.FGrid(args.grid_f1 or ub.DEFAULT_Q_FGRID.f1, args.grid_f2 or ub.DEFAULT_Q_FGRID.f2)
    f2g = ub.FGrid(args.grid_case2_f1 or ub.DEFAULT_CASE2_FGRID.f1,
                   args.grid_case2_f2 or ub.DEFAULT_CASE2_FGRID.f2)
    keep = "all" if args.all_rows else "block-best"
    rep1 = ub.min_over_region_q(pg, fq, args.refine, region=args.region, workers=args.threads, keep=keep)
    rep2 = ub.case2_min(pg, f2g, args.refine, mode=args.case2_mode, workers=args.threads, keep=keep)
    _write(args.out, "case1.csv", ub.sweep_csv(rep1))
    _write(args.out, "case2.csv", ub.sweep_csv(rep2))

    failures = []
    summary = {"case1": {"evaluated": rep1.evaluated, "best": _summary_row(rep1.best)},
               "case2": {"evaluated": rep2.evaluated, "best": _summary_row(rep2.best)}}
    if rep1.empty or rep2.empty:
        which = "Case-1" if rep1.empty else "Case-2"
        print(f"{which} grid has no feasible point", file=sys.stderr)
        return EXIT_INVALID
    m1, m2 = rep1.minimum, rep2.minimum
    cert = ub.overall_ub_certificate(rep1, rep2)
    summary["certificate"] = num(cert)
    if m1 * m1 < args.case1_floor_sq:
        failures.append(("case1", rep1.best, f"slope sum squared {ub.fmt_decimal(m1 * m1)} < {args.case1_floor_sq}"))
    if m2 < args.case2_floor:
        failures.append(("case2", rep2.best, f"value {ub.fmt_decimal(m2)} < {args.case2_floor}"))
    if cert > args.cert_max:
        failures.append(("certificate", None, f"{ub.fmt_decimal(cert)} > {args.cert_max}"))
    if args.cert_min is not None and cert < args.cert_min:
        failures.append(("certificate", None, f"{ub.fmt_decimal(cert)} < {args.cert_min}"))
    summary["passed"] = not failures
    _write(args.out, "summary.json", dumps(summary))

    lines = [
        f"case1 min slope sum {ub.fmt_decimal(m1)} over {rep1.evaluated} points "
        f"(LP value {ub.fmt_decimal(ub.slope_sum_to_value(m1))}), sqrt(3) floor {'met' if ub.meets_sqrt3(m1) else 'MISSED'}",
        f"case2 min value {ub.fmt_decimal(m2)} over {rep2.evaluated} points ({args.case2_mode})",
        f"certificate {ub.fmt_decimal(cert)} ({cert})",
    ]
    _emit(args, summary, lines)
    for what, row, msg in failures:
        print(f"FAILED {what}: {msg}; row {_summary_row(row)}", file=sys.stderr)
    return EXIT_VERIFY if failures else EXIT_OK


# --- verify-lb / sweep-q -----------------------------------------------------


def cmd_verify_lb(args) -> int:
    t_star, q_star = lb.maximize_q(args.grid_t, args.refine, workers=1)
    samples = lb.triangle_samples(args.samples, args.seed)
    rep = lb.closure_membership_check(args.t, samples)
    _write(args.out, "q_sweep.csv", lb.q_sweep_csv(lb.q_sweep(args.grid_t)))
    _write(args.out, "membership.csv", lb.membership_csv(rep))
    gq = lb.g_quantities(args.t)
    summary = {
        "t_star": num(t_star), "q_star": num(q_star),
        "witness_quantities": {k: num(v) for k, v in gq.as_row().items()},
        "samples": rep.count, "skipped": rep.skipped,
        "min_slack": num(rep.min_slack) if rep.min_slack is not None else None,
    }
    ok_q = q_star == Fraction(9, 8) and abs(t_star - 2) <= Fraction(1, 1000)
    ok_s = rep.passed
    summary["passed"] = ok_q and ok_s
    _write(args.out, "summary.json", dumps(summary))
    lines = [f"q* = {q_star} at t* = {t_star}",
             f"membership at t = {args.t}: {rep.count} samples, min slack {rep.min_slack}"]
    _emit(args, summary, lines)
    if not ok_s and rep.witness is not None:
        bad = next(s for s in samples if s.index == rep.witness.sample_id)
        print("FAILED membership; witness triangle:", file=sys.stderr)
        sys.stderr.write(dumps(lattice_free_to_json(bad.set)))
    if not ok_q:
        print(f"FAILED q maximum: {q_star} at {t_star}", file=sys.stderr)
    return EXIT_OK if summary["passed"] else EXIT_VERIFY


def cmd_sweep_q(args) -> int:
    rows = lb.q_sweep(args.grid_t)
    if args.format == "json":
        text = dumps([{k: num(v) for k, v in r.as_row().items()} for r in rows])
    else:
        text = lb.q_sweep_csv(rows)
    if args.out:
        _write(os.path.dirname(args.out) or ".", os.path.basename(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- audit-identity ----------------------------------------------------------


def cmd_identity_audit(args) -> int:
    if args.params is not None or args.f is not None:
        if args.params is None or args.f is None or len(args.params) != 3 or len(args.f) != 2:
            raise InputError("--params needs u,v,w and --f needs f1,f2")
        scenes = [ub.build_scene(SlopeParams(*args.params), pt(*args.f))]
    else:
        if args.n < 1:
            raise InputError("-n must be at least 1")
        scenes = ub.random_case1_scenes(args.n, args.seed)
    lines = []
    for sc in scenes:
        geo = ub.geometric_reciprocal_sum(sc)
        closed = ub.slope_identity_rhs(sc.params, sc.f)
        if geo != closed:
            print(f"MISMATCH at (u,v,w)={tuple(map(str, sc.params.astuple()))} f={sc.f}: "
                  f"geometric {geo} vs closed form {closed}", file=sys.stderr)
            return EXIT_VERIFY
        lines.append(f"(u,v,w)=({', '.join(map(str, sc.params.astuple()))}) f=({sc.f.x}, {sc.f.y}): {geo} = {closed}")
    if len(scenes) > 1 and not args.verbose:
        lines = [f"{len(scenes)} scenes: geometric and closed-form sums agree exactly"]
    _emit(args, {"scenes": len(scenes), "passed": True}, lines)
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cornercuts", description="Exact lattice-free cuts and closure bounds in two rows.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        return sp

    sp = common(sub.add_parser("classify", help="classify a maximal lattice-free set"))
    sp.add_argument("--input", required=True, help="JSON set file")
    sp.set_defaults(func=cmd_classify)

    sp = common(sub.add_parser("cut", help="intersection cut coefficients"))
    sp.add_argument("--input", required=True, help="JSON set file")
    sp.add_argument("--instance", required=True, help="JSON file with f and rays")
    sp.set_defaults(func=cmd_cut)

    threads_help = f"worker processes (default ${THREADS_ENV} or CPU count)"
    sp = common(sub.add_parser(
        "verify-ub", help="Case-1 and Case-2 sweeps and the overall certificate",
        description="Default grids: 720 slope triples; f on a 1/40 mesh plus points near 0. "
                    "Takes about a minute on one core."))
    for name in ("u", "v", "w", "f1", "f2", "case2-f1", "case2-f2"):
        sp.add_argument(f"--grid-{name}", type=_axis, default=None, metavar="SPEC",
                        help="comma list or lo:hi:step")
    sp.add_argument("--refine", type=int, default=3, help="zoom rounds around the incumbent")
    sp.add_argument("--region", choices=("q", "case1"), default="q")
    sp.add_argument("--case2-mode", choices=("basu", "exact-two"), default="basu")
    sp.add_argument("--case1-floor-sq", type=rat, default=Fraction(3), help="require (min slope sum)^2 >= this")
    sp.add_argument("--case2-floor", type=rat, default=Fraction("0.5857"))
    sp.add_argument("--cert-max", type=rat, default=Fraction("1.7072"))
    sp.add_argument("--cert-min", type=rat, default=None)
    sp.add_argument("--threads", type=int, default=None, help=threads_help)
    sp.add_argument("--all-rows", action="store_true", help="keep every feasible row, not one per slope triple")
    sp.add_argument("--out", default=None, help="directory for CSV and JSON reports")
    sp.set_defaults(func=cmd_verify_ub)

    sp = common(sub.add_parser("verify-lb", help="q maximum and sampled triangle-closure membership",
                               description="Default: t grid 1/10..10 step 1/10, 10000 samples (under a minute)."))
    sp.add_argument("--grid-t", type=_axis, default=None, metavar="SPEC")
    sp.add_argument("--refine", type=int, default=3)
    sp.add_argument("--t", type=rat, default=Fraction(2), help="quadrilateral used for membership")
    sp.add_argument("--samples", type=int, default=10000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None, help="directory for CSV and JSON reports")
    sp.set_defaults(func=cmd_verify_lb)

    sp = common(sub.add_parser("audit-identity", help="geometric vs closed-form reciprocal sums"))
    sp.add_argument("-n", "--n", type=int, default=100)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--params", type=_pair, default=None, metavar="U,V,W")
    sp.add_argument("--f", type=_pair, default=None, metavar="F1,F2")
    sp.add_argument("--verbose", action="store_true")
    sp.set_defaults(func=cmd_identity_audit)

    sp = common(sub.add_parser("sweep-q", help="q and its ingredients along a t grid"))
    sp.add_argument("--grid-t", type=_axis, default=None, metavar="SPEC")
    sp.add_argument("--out", default=None, help="output file (default stdout)")
    sp.set_defaults(func=cmd_sweep_q, format="csv")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # --help, or a usage error already reported
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    if getattr(args, "threads", 1) is None:
        args.threads = default_workers()
    if getattr(args, "samples", 1) < 1:
        print("error: --samples must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (FormatError, InputError, OSError, KeyError, TypeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ClassificationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (GeometryError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
