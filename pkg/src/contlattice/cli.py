"""Command-line interface: ``eval``, ``table``, ``simulate``, ``verify``.

Examples::

    contlattice eval cbinom x=1 s=0
    contlattice table pdf x=10 p=0.25 s=0:10 --steps 200 --output pdf.csv
    contlattice simulate c=1 lambda=1.3 t=15 --seed 42 --count 1000
    contlattice verify all
"""
from __future__ import annotations

import argparse
import csv
import functools
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable

from . import catalan_numbers as cat
from . import binomial as cb
from . import distribution as dist
from . import telegraph as tg
from . import verify as vf
from .errors import ContLatticeError
from .special import bessel_i_float

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Function:
    params: tuple[str, ...]
    impl: Callable[..., float]
    help: str


@functools.lru_cache(maxsize=32)
def _dist(x, p):
    return dist.DistParams(x, p)


FUNCTIONS: dict[str, Function] = {
    "cbinom": Function(("x", "s"), cb.cbinom, "continuous binomial coefficient <x s>"),
    "central_binomial": Function(("s",), cb.central_binomial, "<2s s>"),
    "catalan": Function(("x", "y"), cat.catalan, "continuous Catalan number C(x, y)"),
    "polytope_volume": Function(("n", "x", "y"), lambda n, x, y: cat.polytope_volume(int(n), x, y),
                                "volume of Lambda^n(x, y)"),
    "normalization": Function(("x", "p"), dist.normalization, "normalizing constant A_{x,p}"),
    "pdf": Function(("x", "p", "s"), lambda x, p, s: dist.pdf(_dist(x, p), s), "density f_{x,p}(s)"),
    "cdf": Function(("x", "p", "s"), lambda x, p, s: dist.cdf(_dist(x, p), s), "distribution function"),
    "quantile": Function(("x", "p", "q"), lambda x, p, q: dist.quantile(_dist(x, p), q), "inverse cdf"),
    "mgf": Function(("x", "p", "u"), lambda x, p, u: dist.mgf(_dist(x, p), u), "E exp(uX)"),
    "moment_symmetric": Function(("x", "k"), lambda x, k: dist.moment_symmetric(x, int(k)),
                                 "E (X - x/2)^k at p = 1/2"),
    "density": Function(("c", "lambda", "t", "s"),
                        lambda c, lam, t, s: tg.density(tg.TelegraphConfig(c, lam, t), s),
                        "telegraph density p(s, t)"),
    "bessel_i": Function(("nu", "z"), bessel_i_float, "modified Bessel I_nu(z)"),
}


def _parse_assignments(items, allow_range=False):
    fixed: dict[str, float] = {}
    sweep = None
    for item in items:
        if "=" not in item:
            raise UsageError(f"expected name=value, got {item!r}")
        name, _, raw = item.partition("=")
        if name == "lam":
            name = "lambda"
        if name in fixed or (sweep and sweep[0] == name):
            raise UsageError(f"argument {name!r} given twice")
        try:
            if allow_range and ":" in raw:
                lo, hi = (float(v) for v in raw.split(":"))
                if sweep is not None:
                    raise UsageError("only one variable can be swept")
                sweep = (name, lo, hi)
            else:
                fixed[name] = float(raw)
        except ValueError:
            raise UsageError(f"cannot parse a number from {item!r}") from None
    return fixed, sweep


def _lookup(name: str) -> Function:
    if name not in FUNCTIONS:
        raise UsageError(f"unknown function {name!r}; choose from {', '.join(sorted(FUNCTIONS))}")
    return FUNCTIONS[name]


def _call(fn: Function, name: str, values: dict[str, float]) -> float:
    missing = [p for p in fn.params if p not in values]
    extra = [p for p in values if p not in fn.params]
    if missing or extra:
        raise UsageError(f"{name} takes {', '.join(fn.params)}; missing {missing}, unexpected {extra}")
    return float(fn.impl(*(values[p] for p in fn.params)))


def _open_output(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def cmd_eval(args) -> int:
    fn = _lookup(args.function)
    values, _ = _parse_assignments(args.args)
    print(f"{_call(fn, args.function, values):.15g}")
    return EXIT_OK


def table_rows(name: str, fixed: dict[str, float], var: str, start: float, stop: float, steps: int):
    """``steps + 1`` pairs ``(v, f(v))`` on an even grid from ``start`` to ``stop``."""
    fn = _lookup(name)
    if var not in fn.params:
        raise UsageError(f"{name} has no parameter {var!r}")
    if steps < 2:
        raise UsageError("--steps must be at least 2")
    if not (math.isfinite(start) and math.isfinite(stop)) or start == stop:
        raise UsageError("sweep range is degenerate")
    rows = []
    for i in range(steps + 1):
        v = stop if i == steps else start + (stop - start) * i / steps
        rows.append((v, _call(fn, name, {**fixed, var: v})))
    return rows


def cmd_table(args) -> int:
    fixed, sweep = _parse_assignments(args.args, allow_range=True)
    if sweep is None:
        raise UsageError("table needs one swept variable, e.g. s=0:10")
    var, start, stop = sweep
    rows = table_rows(args.function, fixed, var, start, stop, args.steps)
    out, close = _open_output(args.output)
    try:
        if args.format == "json":
            for v, f in rows:
                out.write(json.dumps({var: v, args.function: f}) + "\n")
        else:
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow([var, args.function])
            for v, f in rows:
                writer.writerow([repr(v), repr(f)])
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_simulate(args) -> int:
    values, _ = _parse_assignments(args.args)
    unknown = set(values) - {"c", "lambda", "t"}
    if unknown or len(values) != 3:
        raise UsageError("simulate takes c=..., lambda=..., t=...")
    if args.count < 1:
        raise UsageError("--count must be positive")
    config = tg.TelegraphConfig(values["c"], values["lambda"], values["t"], seed=args.seed)
    batch = tg.simulate(config, args.count, workers=args.workers)
    out, close = _open_output(args.output)
    try:
        if args.format == "json":
            for sample in batch:
                out.write(json.dumps({"kind": sample.kind.value, "position": sample.position,
                                      "switch_count": sample.switch_count}) + "\n")
        else:
            tg.write_samples_csv(batch, out)
    finally:
        if close:
            out.close()
    if args.switch_times:
        with open(args.switch_times, "w", newline="", encoding="utf-8") as fh:
            tg.write_switch_times_csv(config, range(args.count), fh)
    print(f"paths={len(batch)} atom_fraction={batch.atom_fraction:.6g} "
          f"expected={config.atom_mass:.6g} mean={float(batch.positions.mean()):.6g}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    selection = args.names or ["all"]
    out, close = _open_output(args.output)
    try:
        if args.format == "csv":
            reports = vf.run_verification_suite(selection)
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(["name", "residual", "tolerance", "passed", "runtime_ms"])
            for r in reports:
                writer.writerow([r.name, repr(r.residual), repr(r.tolerance), r.passed, f"{r.runtime_ms:.3f}"])
        else:
            reports = vf.run_verification_suite(selection, out, "json" if args.format == "json" else "text")
    finally:
        if close:
            out.close()
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contlattice",
                                     description="Continuous binomial and Catalan numbers, telegraph process.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one function")
    p_eval.add_argument("function", help=", ".join(sorted(FUNCTIONS)))
    p_eval.add_argument("args", nargs="*", metavar="name=value")
    p_eval.set_defaults(handler=cmd_eval)

    p_table = sub.add_parser("table", help="tabulate a function over one variable")
    p_table.add_argument("function")
    p_table.add_argument("args", nargs="*", metavar="name=value|name=start:stop")
    p_table.add_argument("--steps", type=int, default=100)
    p_table.add_argument("--output", "-o")
    p_table.add_argument("--format", choices=("csv", "json"), default="csv")
    p_table.set_defaults(handler=cmd_table)

    p_sim = sub.add_parser("simulate", help="simulate telegraph paths")
    p_sim.add_argument("args", nargs="*", metavar="c=|lambda=|t=")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--count", type=int, default=1000)
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--output", "-o")
    p_sim.add_argument("--switch-times", help="also write per-path switch times to this file")
    p_sim.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sim.set_defaults(handler=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run the identity checks")
    p_ver.add_argument("names", nargs="*", help="identity names or 'all'")
    p_ver.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p_ver.add_argument("--output", "-o")
    p_ver.add_argument("--list", action="store_true", help="list identity names and exit")
    p_ver.set_defaults(handler=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.list:
        for name in sorted(vf.REGISTRY):
            print(f"{name}: {vf.REGISTRY[name].description}")
        return EXIT_OK
    try:
        return args.handler(args)
    except (UsageError, ContLatticeError) as exc:
        print(f"contlattice {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"contlattice {args.command}: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
