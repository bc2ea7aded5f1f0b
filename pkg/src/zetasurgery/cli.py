"""Command-line front end.

Every subcommand writes a report

    {"command", "config", "results": [{name, value, error_bound, expected,
     tolerance, pass}], "seed"}

to stdout or --output (JSON, or CSV for grid experiments).  Exit status is 0
when every check passes, 1 when one fails and 2 on bad input or a
numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from typing import Any, Sequence

from . import relative_det as rel
from .acceptance import CRITERIA, CriterionReport, criterion_9, reports_to_dict, _jsonable
from .cylinder import CylinderModel, cylinder_log_det_closed, cylinder_log_det_direct, cylinder_log_det_product
from .errors import ZetaSurgeryError
from .oned_oracle import SchrodingerProblem, bfk_1d_check, constant_potential, gy_det_checked, step_potential, well_potential
from .scattering import det_s_identity_deviation
from .spectra import CrossSectionSpectrum, circle_spectrum, point_spectrum, shift_spectrum, spectrum_from_dict, torus_spectrum
from .surgery import LAWS, Cap, SurgeryModel, adiabatic_experiment, bfk_check, model_from_dict, relative_log_det_via_gluing
from .zeta_det import xi_prime_zero, zeta_at, zeta_at_zero, zeta_prime_zero


def _add_spectrum_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cross-section", choices=("circle", "torus", "point"), default="circle")
    p.add_argument("--circumference", type=float, default=1.0, help="circle length (first torus side)")
    p.add_argument("--circumference2", type=float, default=1.0, help="second torus side")
    p.add_argument("--points", type=int, default=1, help="fibre size for a point cross-section")
    p.add_argument("--shift", type=float, default=0.0, help="constant added to Delta_Y")
    p.add_argument("--spectrum-json", help="cross-section as a JSON document (overrides the above)")


def _spectrum(args: argparse.Namespace) -> CrossSectionSpectrum:
    if args.spectrum_json:
        return spectrum_from_dict(json.loads(args.spectrum_json))
    if args.cross_section == "circle":
        spec = circle_spectrum(args.circumference)
    elif args.cross_section == "torus":
        spec = torus_spectrum(args.circumference, args.circumference2)
    else:
        spec = point_spectrum(args.points)
    return shift_spectrum(spec, args.shift)


def _add_model_args(p: argparse.ArgumentParser, single: bool = False) -> None:
    _add_spectrum_args(p)
    p.add_argument("--a1", type=float, default=0.7)
    p.add_argument("--bc1", choices=("D", "N"), default="D")
    if not single:
        p.add_argument("--a2", type=float, default=1.3)
        p.add_argument("--bc2", choices=("D", "N"), default="D")
        p.add_argument("--single", action="store_true", help="drop the second cap")
    p.add_argument("--r", type=float, default=1.0, help="neck half-length")
    p.add_argument("--model-json", help="SurgeryModel as a JSON document (overrides the above)")


def _model(args: argparse.Namespace) -> SurgeryModel:
    if args.model_json:
        return model_from_dict(json.loads(args.model_json))
    cap2 = None if getattr(args, "single", True) else Cap(args.a2, args.bc2)
    return SurgeryModel(_spectrum(args), Cap(args.a1, args.bc1), cap2, args.r)


def _result(name: str, value: Any, error_bound: Any, expected: Any, tolerance: Any, ok: bool) -> dict[str, Any]:
    return {
        "name": name,
        "value": value,
        "error_bound": "heuristic" if error_bound is None else error_bound,
        "expected": expected,
        "tolerance": tolerance,
        "pass": bool(ok),
    }


def _within(value: float, expected: float, tol: float, relative: bool = True) -> bool:
    scale = abs(expected) if relative and expected else 1.0
    return math.isfinite(value) and abs(value - expected) <= tol * scale


# ---- subcommands --------------------------------------------------------


def cmd_det_cylinder(args: argparse.Namespace) -> tuple[list[dict], list[list] | None]:
    m = CylinderModel(_spectrum(args), args.length)
    closed = cylinder_log_det_closed(m)
    direct = cylinder_log_det_direct(m)
    product = cylinder_log_det_product(m)
    tol = args.tolerance
    return [
        _result("closed form", closed.value, closed.value * closed.error_bound, direct.value, tol,
                _within(closed.value, direct.value, tol)),
        _result("direct", direct.value, direct.value * direct.error_bound, None, None, True),
        _result("product Mellin", product.value, product.value * product.error_bound, closed.value, tol,
                _within(product.value, closed.value, tol)),
    ], None


def cmd_zeta(args: argparse.Namespace) -> tuple[list[dict], list[list] | None]:
    spec = _spectrum(args)
    tol = args.tolerance
    out = [_result("zeta(0)", zeta_at_zero(spec), None, None, None, True)]
    zp, zp_err = zeta_prime_zero(spec)
    out.append(_result("zeta'(0)", zp, zp_err, None, tol, zp_err <= tol))
    out.append(_result("det", math.exp(-zp), math.exp(-zp) * zp_err, None, tol, zp_err <= tol))
    xi, xi_err = xi_prime_zero(spec)
    out.append(_result("xi'(0)", xi, xi_err, None, tol, xi_err <= tol))
    for s in args.s:
        val, err = zeta_at(spec, s)
        out.append(_result(f"zeta({s})", val, err, None, tol, err <= tol))
    return out, None


def cmd_relative_det(args: argparse.Namespace) -> tuple[list[dict], list[list] | None]:
    spec = _spectrum(args)
    pair = rel.make_pair(args.pair, spec, args.a)
    log_val, err = rel.relative_log_det(pair)
    val = math.exp(log_val)
    out = [_result(f"det({args.pair})", val, val * err, None, None, True)]
    cap = {"translate": "D", "neumann-translate": "N"}.get(args.pair)
    if cap:
        glued = relative_log_det_via_gluing(SurgeryModel(spec, Cap(args.a, cap), None))
        out.append(_result("gluing route", glued.value, glued.value * glued.error_bound, val, args.tolerance,
                           _within(glued.value, val, args.tolerance)))
    return out, None


def cmd_bfk_check(args: argparse.Namespace) -> tuple[list[dict], list[list] | None]:
    m = _model(args)
    out = []
    for z in args.z:
        res = bfk_check(m, z, args.convention)
        out.append(_result(f"lhs/rhs at z={z}", res.ratio, res.log_error_bound, 1.0, args.tolerance,
                           abs(res.ratio - 1.0) <= args.tolerance))
    return out, None


def cmd_surgery(args: argparse.Namespace) -> tuple[list[dict], list[list] | None]:
    m = _model(args)
    report = adiabatic_experiment(args.law, m, args.grid, args.tolerance)
    out = [
        _result(f"{args.law} limit", report["limit_estimate"], None, report["predicted"], args.tolerance, report["pass"]),
        _result("observed rate", report["rate"], None, report["rate_model"], None, True),
    ]
    rows = [["r", "value", "error"]] + [[r, v, e] for r, v, e in zip(report["grid"], report["values"], report["errors"])]
    return out, rows


def cmd_scattering_check(args: argparse.Namespace) -> tuple[list[dict], list[list] | None]:
    dev = det_s_identity_deviation(args.trials, args.max_dim, args.seed)
    return [_result("max |det S - det((Id - C12)/2)|", dev, None, 0.0, args.tolerance, dev <= args.tolerance)], None


def _potential(args: argparse.Namespace):
    if args.potential == "constant":
        return constant_potential(args.value)
    if args.potential == "well":
        return well_potential(args.depth, args.start, args.stop)
    vals = [float(v) for v in args.values]
    edges = [args.left + i * (args.right - args.left) / len(vals) for i in range(len(vals) + 1)]
    return step_potential(edges, vals)


def cmd_oracle_1d(args: argparse.Namespace) -> tuple[list[dict], list[list] | None]:
    p = SchrodingerProblem(_potential(args), args.left, args.right, args.bc, args.z)
    det, err = gy_det_checked(p)
    out = [_result("Gelfand-Yaglom det", det, err, None, None, True)]
    if args.cuts:
        g = bfk_1d_check(p, args.cuts)
        expected = 0.5 ** len(args.cuts)
        out.append(_result("measured gluing constant", g.constant, None, expected, args.tolerance,
                           abs(g.constant - expected) <= args.tolerance))
    return out, None


def cmd_acceptance(args: argparse.Namespace) -> tuple[list[dict], list[list] | None]:
    chosen = args.only or sorted(CRITERIA)
    reports: list[CriterionReport] = []
    for n in chosen:
        rep = criterion_9(args.seed) if n == 9 else CRITERIA[n]()
        print(rep.line(), file=sys.stderr)
        reports.append(rep)
    out = []
    for rep, d in zip(reports, reports_to_dict(reports)):
        for r in d["results"]:
            out.append({**r, "name": f"[{rep.number}] {r['name']}"})
    return out, None


COMMANDS = {
    "det-cylinder": cmd_det_cylinder,
    "zeta": cmd_zeta,
    "relative-det": cmd_relative_det,
    "bfk-check": cmd_bfk_check,
    "surgery": cmd_surgery,
    "scattering-check": cmd_scattering_check,
    "oracle-1d": cmd_oracle_1d,
    "acceptance": cmd_acceptance,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zetasurgery", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON document whose keys set option defaults")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("det-cylinder", parents=[common], help="Dirichlet cylinder determinant by three routes")
    _add_spectrum_args(p)
    p.add_argument("--length", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1e-6)

    p = sub.add_parser("zeta", parents=[common], help="zeta function data of a cross-section")
    _add_spectrum_args(p)
    p.add_argument("--s", type=float, nargs="*", default=[])
    p.add_argument("--tolerance", type=float, default=1e-8)

    p = sub.add_parser("relative-det", parents=[common], help="relative determinant of a named pair")
    _add_spectrum_args(p)
    p.add_argument("--pair", choices=rel.PAIR_KINDS, default="translate")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1e-5)

    p = sub.add_parser("bfk-check", parents=[common], help="two-cut gluing identity")
    _add_model_args(p)
    p.add_argument("--z", type=float, nargs="+", default=[0.3, 1.0, 10.0])
    p.add_argument("--convention", choices=("plus", "minus"), default="plus")
    p.add_argument("--tolerance", type=float, default=1e-6)

    p = sub.add_parser("surgery", parents=[common], help="adiabatic limit experiment")
    _add_model_args(p)
    p.add_argument("--law", choices=LAWS, default="stretched-caps")
    p.add_argument("--grid", type=float, nargs="+", default=[1.0, 2.0, 4.0, 8.0])
    p.add_argument("--tolerance", type=float, default=1e-6)

    p = sub.add_parser("scattering-check", parents=[common], help="random involution pairs")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-dim", type=int, default=8)
    p.add_argument("--tolerance", type=float, default=1e-10)

    p = sub.add_parser("oracle-1d", parents=[common], help="Gelfand-Yaglom determinant and 1D gluing")
    p.add_argument("--potential", choices=("constant", "well", "steps"), default="constant")
    p.add_argument("--value", type=float, default=0.0)
    p.add_argument("--depth", type=float, default=1.0)
    p.add_argument("--start", type=float, default=0.25)
    p.add_argument("--stop", type=float, default=0.75)
    p.add_argument("--values", nargs="+", default=["0.0"])
    p.add_argument("--left", type=float, default=0.0)
    p.add_argument("--right", type=float, default=1.0)
    p.add_argument("--bc", default="DD")
    p.add_argument("--z", type=float, default=0.0)
    p.add_argument("--cuts", type=float, nargs="*", default=[])
    p.add_argument("--tolerance", type=float, default=1e-8)

    p = sub.add_parser("acceptance", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", type=int, nargs="*", choices=sorted(CRITERIA))
    return parser


def _write_atomic(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".report-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _render(report: dict[str, Any], rows: list[list] | None, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(report), indent=2, default=str) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf)
    if rows is None:
        rows = [["name", "value", "error_bound", "expected", "tolerance", "pass"]] + [
            [r["name"], r["value"], r["error_bound"], r["expected"], r["tolerance"], r["pass"]] for r in report["results"]
        ]
    writer.writerows(rows)
    return buf.getvalue()


def parse_args(argv: Sequence[str] | None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        sub = parser._subparsers._group_actions[0].choices[args.command]  # type: ignore[union-attr]
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in cfg.items()})
        args = parser.parse_args(argv)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    config = {k: v for k, v in vars(args).items() if k not in ("output", "format")}
    try:
        results, rows = COMMANDS[args.command](args)
    except (ZetaSurgeryError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command, "config": config, "results": results, "seed": args.seed}
    _write_atomic(_render(report, rows, args.format), args.output)
    return 0 if all(r["pass"] for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
