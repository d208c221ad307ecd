"""galconf command line: verify, charges, transform."""
from __future__ import annotations

import argparse
import csv
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction

from . import noether
from .exact_algebra import T, AlgebraError, as_poly, substitute
from .group_action import (OffShellError, PolyTrajectory, apply_point_transform, parse_spec)
from .model import ConfigError, ModelConfig, desk_matrix
from .phase_space import build_charges, label_text
from .render import render_named, render_poly, render_scalar
from .suites import SUITES, run

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _config(args) -> ModelConfig:
    dim = args.dim if args.dim is not None else (3 if args.N % 2 else 2)
    try:
        return ModelConfig(args.N, dim, args.m)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_verify(args) -> int:
    configs = [_config(args)] if args.N is not None else desk_matrix()
    reports = []
    for cfg in configs:
        rep = run(cfg, args.suite)
        print(f"== {cfg.label()} suite={args.suite}")
        print(rep.to_text() if args.verbose else _brief(rep))
        reports.append(rep)
    if args.json:
        payload = reports[0].as_dict() if len(reports) == 1 else {
            "reports": [r.as_dict() for r in reports],
            "summary": {key: sum(r.summary[key] for r in reports)
                        for key in ("passed", "failed", "discrepancies")},
        }
        with open(args.json, "w") as fh:
            fh.write(_dump(payload))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def _brief(rep) -> str:
    lines = []
    for c in rep.checks:
        if c.status != "pass":
            lines.append(f"[{c.status}] {c.id}: {c.description}")
            if c.witness:
                w = c.witness if len(c.witness) < 160 else c.witness[:160] + " ..."
                lines.append(f"    witness: {w}")
    s = rep.summary
    lines.append(f"passed={s['passed']} failed={s['failed']} discrepancies={s['discrepancies']}")
    return "\n".join(lines)


def _charge_data(cfg: ModelConfig):
    cs = build_charges(cfg)
    Lm = noether.free_lagrangian(cfg)
    momenta, H = noether.ostrogradski(Lm)
    lagrangian = noether.lagrangian_charges(cfg)
    return cs, momenta, H, lagrangian


def cmd_charges(args) -> int:
    cfg = _config(args)
    cs, momenta, H, lag = _charge_data(cfg)
    if args.format == "json":
        payload = {
            "model": cfg.as_dict(),
            "phase_space": {label_text(lab): v.to_text() for lab, v in cs.named()},
            "momenta": {f"p{n}^{a}": p[a - 1].to_text() for n, p in enumerate(momenta) for a in cfg.comps},
            "hamiltonian": H.to_text(),
            "noether": {label_text(lab): v.to_text() for lab, v in sorted(lag.items())},
        }
        sys.stdout.write(_dump(payload))
        return EXIT_OK
    print(f"# {cfg.label()}")
    print("# phase space")
    print(f"h = {render_scalar(cs.h, cfg.d)}")
    print(f"d = {render_scalar(cs.d, cfg.d)}")
    print(f"k = {render_scalar(cs.k, cfg.d)}")
    for lab, v in cs.named():
        if lab[0] == "j":
            print(f"{label_text(lab)} = {render_poly(v)}")
    for k in range(cfg.N + 1):
        for line in render_named(f"c_{k}", [cs.c[(k, a)] for a in cfg.comps]):
            print(line)
    print("# Ostrogradski momenta and Hamiltonian")
    for n, p in enumerate(momenta):
        for line in render_named(f"p{n}", p):
            print(line)
    print(f"H = {render_scalar(H, cfg.d)}")
    print("# Noether charges")
    for name in ("h", "d", "k"):
        print(f"{name.upper()} = {render_scalar(lag[(name,)], cfg.d)}")
    for lab in sorted(lag):
        if lab[0] == "j":
            # the charge of chi = omega x q is -omega.J
            print(f"J^{lab[1]} = {render_poly(-lag[lab])}")
    for k in range(cfg.N + 1):
        for line in render_named(f"C_{k}", [lag[("c", k, a)] for a in cfg.comps]):
            print(line)
    return EXIT_OK


def _load_trajectory(path: str, cfg_args) -> tuple[ModelConfig, PolyTrajectory]:
    try:
        with open(path) as fh:
            data = json.load(fh)
        N = int(data["N"]) if cfg_args.N is None else cfg_args.N
        dim = int(data["dim"]) if cfg_args.dim is None else cfg_args.dim
        if cfg_args.N is not None and int(data.get("N", N)) != N:
            raise UsageError("trajectory file N disagrees with --N")
        coeffs = [[Fraction(str(v)) for v in row] for row in data["coeffs"]]
    except (OSError, KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read trajectory {path!r}: {exc}") from exc
    try:
        cfg = ModelConfig(N, dim, cfg_args.m)
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    if any(len(row) != dim for row in coeffs):
        raise UsageError(f"every coefficient row needs {dim} entries")
    return cfg, PolyTrajectory.from_coeffs(coeffs)


def _grid(text: str) -> list[Fraction]:
    try:
        start, step, count = text.split(":")
        return [Fraction(start) + i * Fraction(step) for i in range(int(count))]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad grid {text!r}; expected start:step:count") from exc


def _decimal(x: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def cmd_transform(args) -> int:
    cfg, traj = _load_trajectory(args.traj, args)
    try:
        spec = parse_spec(args.op, cfg.d)
    except (ValueError, AlgebraError) as exc:
        raise UsageError(str(exc)) from exc
    try:
        image = apply_point_transform(spec, traj, cfg)
    except OffShellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    coeffs = [[str(v) for v in row] for row in image.coeffs()]
    payload = {"N": cfg.N, "dim": cfg.d, "op": args.op, "coeffs": coeffs}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(_dump(payload))
    else:
        sys.stdout.write(_dump(payload))
    if args.csv:
        points = _grid(args.grid or "0:1/10:11")
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t"] + [f"q{a}" for a in cfg.comps])
            for t0 in points:
                values = [as_poly(substitute(c, {T: t0})).constant_value() for c in image.components]
                w.writerow([_decimal(t0, args.digits)] + [_decimal(v, args.digits) for v in values])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="galconf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def model_flags(p, required):
        p.add_argument("--N", type=int, required=required, help="order of the model")
        p.add_argument("--dim", type=int, help="spatial dimension (3 for odd N, 2 for even N)")
        p.add_argument("--m", type=_rational, help="numeric mass; symbolic when omitted")

    v = sub.add_parser("verify", help="run verification suites")
    model_flags(v, required=False)
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--json", help="write the JSON report to this path")
    v.add_argument("--verbose", action="store_true", help="list every check")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("charges", help="print phase-space and Noether charges")
    model_flags(c, required=True)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_charges)

    t = sub.add_parser("transform", help="apply a finite transformation to a trajectory")
    model_flags(t, required=False)
    t.add_argument("--traj", required=True, help='JSON file {"N", "dim", "coeffs"}')
    t.add_argument("--op", required=True, help="e.g. boost:k=2,x=1/2,0,0 or conformal:c=1/2")
    t.add_argument("--out", help="output JSON path (stdout when omitted)")
    t.add_argument("--csv", help="also sample the image on a grid into this CSV file")
    t.add_argument("--grid", help="rational grid start:step:count")
    t.add_argument("--digits", type=int, default=12, help="significant digits in the CSV")
    t.set_defaults(func=cmd_transform)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"galconf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
