"""Command line entry point: ``freeeuler {simulate,check,trace,project,derive}``.

Exit codes: 0 success, 1 usage or parse error, 2 invariant failure or
instability, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import warnings
from pathlib import Path

from . import __version__
from .algebra import BiTensor, cyclic_diff, directional, free_diff
from .checks import DEFAULT_SUITES, SUITES, run_suite
from .errors import FreeEulerError, InstabilityError, ParseError, ResourceLimitError
from .euler import SimConfig, simulate
from .leray import gradient_part, leray_project, recover_pressure
from .parsing import _split_top_level, format_field, format_poly, format_word, parse_field, parse_poly
from .scalars import format_float, format_scalar
from .semicircular import trace

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_RESOURCE = 0, 1, 2, 3

CONFIG_KEYS = {
    "n", "trunc_degree", "dt", "t_end", "integrator", "mode", "viscosity",
    "moments", "initial_field", "output_dir", "sample_every",
}


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits with 2 by default; usage errors here are 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _infer_n(text: str) -> int:
    indices = [int(m) for m in re.findall(r"s(\d+)", text)]
    return max(indices + [1])


def _scalar_text(x, exact: bool) -> str:
    if exact:
        return format_scalar(x)
    if isinstance(x, complex):
        return format_float(x)
    return format(float(x), ".17g")


def _json_scalar(x, exact: bool):
    return format_scalar(x) if exact else float(x)


def format_bitensor(T: BiTensor, exact: bool = True) -> str:
    if not T.terms:
        return "0"
    parts = []
    for (u, v), c in sorted(T.terms.items(), key=lambda kv: (len(kv[0][0]) + len(kv[0][1]), kv[0])):
        coef = format_scalar(c) if exact else format_float(c)
        parts.append(f"({coef}) * {format_word(u)} (x) {format_word(v)}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# simulate


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}") from None
    if isinstance(raw, dict) and "config" in raw and "records" in raw:
        raw = raw["config"]  # a run manifest re-runs its echoed config
    if not isinstance(raw, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(raw) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config fields: {', '.join(sorted(unknown))}")
    for key in ("n", "trunc_degree", "initial_field"):
        if key not in raw:
            raise UsageError(f"config is missing {key!r}")
    return raw


def build_run(raw: dict, mode=None):
    cfg_kwargs = {k: raw[k] for k in CONFIG_KEYS - {"initial_field", "output_dir"} if k in raw}
    if mode:
        cfg_kwargs["mode"] = mode
    try:
        cfg = SimConfig(**cfg_kwargs)
        cfg.n_steps
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid config: {exc}") from None
    comps = raw["initial_field"]
    if not isinstance(comps, list) or len(comps) != cfg.n:
        raise UsageError(f"initial_field must be a list of {cfg.n} polynomial strings")
    v0 = parse_field("(" + ", ".join(comps) + ")", cfg.n, cfg.mode)
    return cfg, v0


def write_series(states, cfg: SimConfig, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t", "energy", "div_residual"] + [f"omega_m{m}" for m in range(1, cfg.moments + 1)])
    for s in states:
        writer.writerow(
            [_scalar_text(s.t, cfg.exact), _scalar_text(s.energy, cfg.exact), format(s.div_residual, ".17g")]
            + [_scalar_text(m, cfg.exact) for m in s.moments]
        )


def manifest(raw: dict, cfg: SimConfig, states, status: str) -> dict:
    config = dict(raw)
    config["mode"] = cfg.mode
    records = [
        {
            "t": _json_scalar(s.t, cfg.exact),
            "energy": _json_scalar(s.energy, cfg.exact),
            "div_residual": s.div_residual,
            "moments": [_json_scalar(m, cfg.exact) for m in s.moments],
        }
        for s in states
    ]
    out = {"version": __version__, "config": config, "records": records, "status": status}
    if states:
        out["final_field"] = format_field(states[-1].v)
        if states[-1].p is not None:
            out["final_pressure"] = format_poly(states[-1].p)
    return out


def cmd_simulate(args) -> int:
    if not args.config:
        raise UsageError("simulate needs --config PATH")
    raw = load_config(args.config)
    cfg, v0 = build_run(raw, args.mode)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        states = simulate(v0, cfg)
    if not args.quiet:
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    out_dir = args.out or raw.get("output_dir")
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        with open(path / "series.csv", "w", newline="") as fh:
            write_series(states, cfg, fh)
        with open(path / "manifest.json", "w") as fh:
            json.dump(manifest(raw, cfg, states, "ok"), fh, indent=2)
            fh.write("\n")
        if not args.quiet:
            print(f"wrote {len(states)} samples to {path}")
    elif not args.quiet:
        buf = io.StringIO()
        write_series(states, cfg, buf)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# ---------------------------------------------------------------------------
# check, trace, project, derive


def cmd_check(args) -> int:
    names = DEFAULT_SUITES if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; known: all, {', '.join(SUITES)}")
    failed = False
    for name in names:
        result = run_suite(name, seed=args.seed, trials=args.trials)
        failed |= not result.passed
        if not args.quiet or not result.passed:
            print(result.summary())
            for what in result.failures[:5]:
                print(f"  {what}")
    return EXIT_INVARIANT if failed else EXIT_OK


def _mode(args) -> str:
    return args.mode or "exact"


def cmd_trace(args) -> int:
    n = args.n or _infer_n(args.expression)
    P = parse_poly(args.expression, n, _mode(args))
    print(_scalar_text(trace(P), P.exact))
    return EXIT_OK


def cmd_project(args) -> int:
    text = args.expression
    body = text.strip()
    n = args.n or (len(_split_top_level(body[1:-1])) if body.startswith("(") else _infer_n(text))
    a = parse_field(text, n, _mode(args))
    print(f"field: {format_field(leray_project(a))}")
    print(f"pressure: {format_poly(recover_pressure(gradient_part(a)))}")
    return EXIT_OK


def cmd_derive(args) -> int:
    text = args.expression
    n = args.n or _infer_n(text + " " + (args.field or ""))
    mode = _mode(args)
    P = parse_poly(text, n, mode)
    for j in range(1, n + 1):
        print(f"d_{j} P = {format_bitensor(free_diff(j, P), P.exact)}")
    for j in range(1, n + 1):
        print(f"delta_{j} P = {format_poly(cyclic_diff(j, P))}")
    if args.field:
        b = parse_field(args.field, n, mode)
        print(f"D_b P = {format_poly(directional(b, P))}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed for check suites")
    common.add_argument("--mode", choices=("exact", "float"), help="scalar arithmetic")
    common.add_argument("--out", help="output directory")
    common.add_argument("--quiet", action="store_true", help="only print failures and results")
    common.add_argument("--config", help="JSON run configuration")

    parser = _ArgumentParser(prog="freeeuler", description="Free Euler equations on semicircular polynomials.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="run the truncated Euler dynamics")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check", parents=[common], help="run an invariant suite")
    p.add_argument("suite", help=f"one of: all, {', '.join(SUITES)}")
    p.add_argument("--trials", type=int, help="override the suite's sample count")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", parents=[common], help="print tau(P)")
    p.add_argument("expression")
    p.add_argument("-n", type=int, help="number of generators (default: largest index used)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("project", parents=[common], help="print the Leray projection and pressure of a field")
    p.add_argument("expression", help="a field such as '(s1, s2)'")
    p.add_argument("-n", type=int)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("derive", parents=[common], help="print the free and cyclic derivatives of P")
    p.add_argument("expression")
    p.add_argument("--field", help="also print D_b P for this field b")
    p.add_argument("-n", type=int)
    p.set_defaults(func=cmd_derive)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InstabilityError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except FreeEulerError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
