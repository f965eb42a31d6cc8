"""Command line entry point: ``squeeze-kit <subcommand> ...``.

Exit status: 0 success, 1 invalid domain/point/numerical input,
2 verification failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from . import gauge as _gauge
from .domains import DomainError, SamplingError
from .geometry import DEFAULT_DIRECTIONS, constants
from .harness import SUITES, SuiteConfig, run_all, run_suite
from .invariants import caratheodory_star_origin, caratheodory_star_sandwich
from .serialization import dumps, load_domain, load_point, parse_int_list
from .squeezing import RULES, derive_bounds, ellipsoid_example

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_USAGE = 64

DEFAULT_SEED = 42
SEED_ENV = "SQUEEZE_KIT_SEED"

SCHEMA_REFERENCE = """\
domain spec JSON: {"type": "ball", "n": N, "radius": r}
                | {"type": "polydisk", "radii": [r1, ...]}
                | {"type": "gen_ellipsoid", "p": [p1, ...], "m": [m1 | "inf", ...]}
                | {"type": "weighted_power", "c": [c1, ...], "s": [s1, ...]}
                | {"type": "product", "factors": [<spec>, ...]}
                | {"type": "sublevel", "base": <spec>, "r": r, "d": [d1, ...]}
point JSON:       [[re, im], ...]  or  {"coords": [[re, im], ...], "block_sizes": [...]}"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv"), default="json")

    parser = _Parser(prog="squeeze-kit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gauge", parents=[fmt], help="(d-)Minkowski gauge of a point")
    p.add_argument("--domain", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--d")
    p.add_argument("--tol", type=float, default=_gauge.DEFAULT_TOL)
    p.add_argument("--method", choices=("auto", "bisection"), default="auto")

    p = sub.add_parser("constants", parents=[fmt], help="alpha, R, P, L of a model domain")
    p.add_argument("--domain", required=True)
    p.add_argument("--d")
    p.add_argument("--oracle-directions", type=int, default=DEFAULT_DIRECTIONS)
    p.add_argument("--oracle", action="store_true",
                   help="use the sampling oracle even if analytic values exist")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("distance", parents=[fmt], help="Caratheodory c* bounds from the origin")
    p.add_argument("--domain", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--d")

    p = sub.add_parser("bounds", parents=[fmt], help="certified squeezing interval")
    p.add_argument("--target", required=True)
    p.add_argument("--model", required=True, action="append",
                   help="model domain; give twice to transfer to a second model")
    p.add_argument("--d")
    p.add_argument("--d2")
    p.add_argument("--rules")
    p.add_argument("--point")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("example", parents=[fmt], help="unit ball into E(p, inf)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", required=True)

    p = sub.add_parser("verify", parents=[fmt], help="run verification suites")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--suite", choices=sorted(SUITES))
    which.add_argument("--all", action="store_true")
    p.add_argument("--samples", type=int, default=SuiteConfig.samples)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--directions", type=int, default=SuiteConfig.directions)
    p.add_argument("--out")
    return parser


def _flat(value):
    if isinstance(value, (dict, list)):
        return dumps(value)
    if isinstance(value, float):
        return format(value, ".17g")
    return value


def _emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        for row in rows:
            out.write(dumps(row) + "\n")
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _flat(v) for k, v in row.items()})
    out.write(buf.getvalue())


def _d(text, n):
    return None if text is None else _gauge.coerce_d(parse_int_list(text), n)


def _run(args, out) -> int:
    cmd = args.command
    if cmd == "gauge":
        spec = load_domain(args.domain)
        z = load_point(args.point)
        res = _gauge.d_minkowski_gauge(spec, _d(args.d, spec.dim), z, tol=args.tol, method=args.method)
        _emit([res.to_dict()], args.format, out)
    elif cmd == "constants":
        spec = load_domain(args.domain)
        seed = _default_seed() if args.seed is None else args.seed
        k = constants(
            spec,
            _d(args.d, spec.dim),
            oracle_directions=args.oracle_directions,
            seed=seed,
            force_oracle=args.oracle,
        )
        _emit([k.to_dict()], args.format, out)
    elif cmd == "distance":
        spec = load_domain(args.domain)
        z = load_point(args.point)
        d = _d(args.d, spec.dim)
        bound = (
            caratheodory_star_origin(spec, z)
            if d is None
            else caratheodory_star_sandwich(spec, d, z)
        )
        _emit([bound.to_dict()], args.format, out)
    elif cmd == "bounds":
        if len(args.model) > 2:
            raise UsageError("--model may be given at most twice")
        target = load_domain(args.target)
        models = [load_domain(m) for m in args.model]
        rules = None
        if args.rules:
            rules = [r.strip() for r in args.rules.split(",") if r.strip()]
            unknown = sorted(set(rules) - set(RULES))
            if unknown:
                raise UsageError(f"unknown rules {unknown}; choose from {list(RULES)}")
        point = load_point(args.point) if args.point else None
        seed = _default_seed() if args.seed is None else args.seed
        result = derive_bounds(
            target,
            models[0],
            _d(args.d, models[0].dim),
            model2=models[1] if len(models) > 1 else None,
            d2=_d(args.d2, models[-1].dim),
            rules=rules,
            point=point,
            seed=seed,
        )
        _emit([result.to_dict()], args.format, out)
    elif cmd == "example":
        result = ellipsoid_example(args.n, parse_int_list(args.p))
        _emit([result.to_dict()], args.format, out)
    elif cmd == "verify":
        seed = _default_seed() if args.seed is None else args.seed
        config = SuiteConfig(samples=args.samples, seed=seed, tolerance=args.tol, directions=args.directions)
        reports = run_all(config) if args.all else [run_suite(args.suite, config)]
        if args.out:
            with open(args.out, "w") as fh:
                for r in reports:
                    fh.write(dumps(r.to_dict()) + "\n")
        _emit([r.to_dict() for r in reports], args.format, out)
        if not all(r.passed for r in reports):
            return EXIT_VERIFY
    return EXIT_OK


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _run(args, out)
    except UsageError as exc:
        err.write(f"{exc}\n{SCHEMA_REFERENCE}\n")
        return EXIT_USAGE
    except (DomainError, SamplingError, _gauge.GaugeError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
