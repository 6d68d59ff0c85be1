"""Command-line interface: weight transforms, norms, potentials and experiments.

Exit codes: 0 success, 2 validation error (bad arguments, malformed specs,
unknown config keys), 3 numeric failure (divergence, tolerance, feasibility).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import TestFunction
from .errors import DivergenceError, DomainError, FeasibilityError, NoRootError, ToleranceError
from .exponents import MultiIndex, PotentialParams, sobolev_q
from .experiments import EXPERIMENT_NAMES, ExperimentConfig, run_experiment
from .grand import grand_norm, v_functional
from .norms import lp_norm_report
from .potentials import EvalGrid, apply_kernel_report, parse_kernel_spec
from .psi import SlowlyVarying, bessel_theta, derivative_zeta, parse_psi_spec, riesz_zeta, singular_psi1, zeta_S
from .quadrature import QuadratureSpec

_CATALOG_FORMS = (
    ("g_delta:DELTA", "x^-1 (ln x)^DELTA on (e, inf)"),
    ("f_delta:ALPHA,DELTA", "x^-ALPHA |ln x|^DELTA on (0, 1/e)"),
    ("h_delta:ALPHA,DELTA", "f_delta + g_delta (disjoint supports)"),
    ("f_zero:ALPHA,GAMMA", "f_delta with DELTA = GAMMA - ALPHA"),
    ("big_r:ALPHA,DELTA[,KAPPA]", "|x|^-ALPHA |ln|x||^DELTA (1+ln(1+|ln|x||))^KAPPA on 0<|x|<1/e"),
    ("example3:ALPHA,GAMMA", "|x|^-ALPHA |ln|x||^(GAMMA-ALPHA) on |x|>1"),
    ("indicator:LO,HI", "1 on [LO, HI]"),
)


def parse_form_spec(text: str) -> TestFunction:
    name, _, args = text.partition(":")
    try:
        vals = [float(v) for v in args.split(",")] if args else []
    except ValueError as exc:
        raise DomainError(f"malformed form spec {text!r}") from exc
    if name == "g_delta" and len(vals) == 1:
        return TestFunction.g_delta(vals[0])
    if name == "f_delta" and len(vals) == 2:
        return TestFunction.f_delta(vals[0], vals[1])
    if name == "h_delta" and len(vals) == 2:
        return TestFunction.h_delta(vals[0], vals[1])
    if name == "f_zero" and len(vals) == 2:
        return TestFunction.f_zero(vals[0], vals[1])
    if name == "big_r" and len(vals) in (2, 3):
        slow = SlowlyVarying.log_power(vals[2]) if len(vals) == 3 else None
        return TestFunction.big_r(vals[0], vals[1], slow)
    if name == "example3" and len(vals) == 2:
        return TestFunction.example3(vals[0], vals[1])
    if name == "indicator" and len(vals) == 2:
        return TestFunction.indicator(vals[0], vals[1])
    raise DomainError(f"unknown form spec {text!r} (see the 'catalog' subcommand)")


def parse_grid_spec(text: str) -> EvalGrid:
    parts = text.split(":")
    if len(parts) != 4:
        raise DomainError(f"grid spec must be RULE:LO:HI:N, got {text!r}")
    rule, lo, hi, n = parts[0], float(parts[1]), float(parts[2]), int(parts[3])
    if rule == "geometric":
        return EvalGrid.geometric(lo, hi, n)
    if rule == "uniform":
        return EvalGrid.uniform(lo, hi, n)
    raise DomainError(f"unknown grid rule {rule!r}")


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _summary_fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _quad_from_args(args) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=args.rel_tol, abs_tol=args.abs_tol, max_depth=args.max_depth)


def _add_quad_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--rel-tol", dest="rel_tol", type=float, default=1e-8)
    sub.add_argument("--abs-tol", dest="abs_tol", type=float, default=1e-12)
    sub.add_argument("--max-depth", dest="max_depth", type=int, default=50)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glpot", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    tr = subs.add_parser("transform", help="evaluate a weight transform over a grid")
    tr.add_argument("--psi", required=True, help="weight spec, e.g. power:a=1,b=2,beta=1,gamma=1")
    tr.add_argument(
        "--kind",
        required=True,
        choices=["riesz_zeta", "derivative_zeta", "bessel_theta", "singular_psi1", "zeta_S"],
    )
    tr.add_argument("--alpha", type=float, default=0.5)
    tr.add_argument("--d", type=int, default=1)
    tr.add_argument("--xi", default=None, help="comma-separated multi-index, e.g. 1,0")
    tr.add_argument("--beta", type=float, default=0.0)
    tr.add_argument("--kappa", type=float, default=0.0)
    tr.add_argument("--qgrid", required=True, help="RULE:LO:HI:N")
    tr.add_argument("--out", default=None)

    lp = subs.add_parser("lpnorm", help="L_p norm of a catalog function")
    lp.add_argument("--form", required=True)
    lp.add_argument("--p", type=float, required=True, action="append")
    lp.add_argument("--out", default=None)
    _add_quad_args(lp)

    gr = subs.add_parser("grand", help="grand norm of a catalog function against a weight")
    gr.add_argument("--form", required=True)
    gr.add_argument("--psi", required=True)
    gr.add_argument("--out", default=None)
    _add_quad_args(gr)

    vf = subs.add_parser("vfun", help="sharpness ratio functional at given exponents")
    vf.add_argument("--form", required=True)
    vf.add_argument("--alpha", type=float, required=True)
    vf.add_argument("--p", type=float, required=True, action="append")
    vf.add_argument("--out", default=None)
    _add_quad_args(vf)

    po = subs.add_parser("potential", help="evaluate a kernel convolution on a grid")
    po.add_argument("--form", required=True)
    po.add_argument("--kernel", required=True, help="e.g. riesz:0.5, truncated:0.5,0,1, bessel:0.5")
    po.add_argument("--grid", required=True, help="RULE:LO:HI:N")
    po.add_argument("--out", default=None)
    _add_quad_args(po)

    ve = subs.add_parser("verify", help="run a named experiment")
    ve.add_argument("experiment", choices=list(EXPERIMENT_NAMES))
    ve.add_argument("--config", default=None, help="JSON config file")
    ve.add_argument("--out", default=None, help="output directory")

    subs.add_parser("catalog", help="list catalog test functions")
    return parser


def _cmd_transform(args) -> int:
    psi = parse_psi_spec(args.psi)
    params = PotentialParams(args.d, args.alpha)
    if args.kind == "riesz_zeta":
        out_psi = riesz_zeta(psi, params)
    elif args.kind == "derivative_zeta":
        xi = MultiIndex(tuple(int(v) for v in (args.xi or "0").split(",")))
        out_psi = derivative_zeta(psi, params, xi)
    elif args.kind == "bessel_theta":
        xi = MultiIndex(tuple(int(v) for v in (args.xi or "1").split(",")))
        out_psi = bessel_theta(psi, params, xi)
    elif args.kind == "singular_psi1":
        out_psi = singular_psi1(psi)
    else:
        slow = SlowlyVarying.log_power(args.kappa) if args.kappa else SlowlyVarying.constant()
        out_psi = zeta_S(psi, params, args.beta, slow)
    grid = parse_grid_spec(args.qgrid)
    lines = ["q,value"]
    for q in grid.points:
        lines.append(f"{_fmt(q)},{_fmt(out_psi(q))}")
    _emit(lines, args.out)
    return 0


def _cmd_lpnorm(args) -> int:
    f = parse_form_spec(args.form)
    spec = _quad_from_args(args)
    lines = ["form,p,value,error_estimate"]
    for p in args.p:
        res = lp_norm_report(f, p, spec)
        lines.append(f"{f.label},{_fmt(p)},{_fmt(res.value)},{_fmt(res.rel_error)}")
    _emit(lines, args.out)
    return 0


def _cmd_grand(args) -> int:
    f = parse_form_spec(args.form)
    psi = parse_psi_spec(args.psi)
    report = grand_norm(f, psi, _quad_from_args(args))
    lines = [
        f"value={_fmt(report.value)}",
        f"argmax_p={_fmt(report.argmax_p)}",
        f"left_unbounded_suspected={str(report.left_unbounded_suspected).lower()}",
        f"right_unbounded_suspected={str(report.right_unbounded_suspected).lower()}",
        f"divergent_points={len(report.divergent_points)}",
    ]
    _emit(lines, args.out)
    return 0


def _cmd_vfun(args) -> int:
    f = parse_form_spec(args.form)
    spec = _quad_from_args(args)
    params = PotentialParams(1, args.alpha)
    lines = ["form,p,q,V"]
    for p in args.p:
        q = sobolev_q(p, params)
        v = v_functional(f, p, args.alpha, spec)
        lines.append(f"{f.label},{_fmt(p)},{_fmt(q)},{_fmt(v)}")
    _emit(lines, args.out)
    return 0


def _cmd_potential(args) -> int:
    f = parse_form_spec(args.form)
    kernel = parse_kernel_spec(args.kernel)
    grid = parse_grid_spec(args.grid)
    spec = _quad_from_args(args)
    lines = ["x,value,error_estimate"]
    for x in grid.points:
        res = apply_kernel_report(f, x, kernel, spec)
        lines.append(f"{_fmt(x)},{_fmt(res.value)},{_fmt(res.error)}")
    _emit(lines, args.out)
    return 0


def _cmd_verify(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
        if cfg.name != args.experiment:
            raise DomainError(f"config is for {cfg.name!r}, not {args.experiment!r}")
    else:
        cfg = ExperimentConfig(name=args.experiment)
    if args.out:
        cfg.output_dir = args.out
    result = run_experiment(cfg)
    status = "PASS" if result.passed else "FAIL"
    sys.stdout.write(f"{result.name}: {status}\n")
    for key, value in result.summary.items():
        sys.stdout.write(f"  {key}={_summary_fmt(value)}\n")
    return 0


def _cmd_catalog(_args) -> int:
    for spec, desc in _CATALOG_FORMS:
        sys.stdout.write(f"{spec:32s} {desc}\n")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    handlers = {
        "transform": _cmd_transform,
        "lpnorm": _cmd_lpnorm,
        "grand": _cmd_grand,
        "vfun": _cmd_vfun,
        "potential": _cmd_potential,
        "verify": _cmd_verify,
        "catalog": _cmd_catalog,
    }
    try:
        return handlers[args.command](args)
    except (DomainError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"validation error: {exc}\n")
        return 2
    except (DivergenceError, ToleranceError, NoRootError, FeasibilityError, OverflowError) as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return 3


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
