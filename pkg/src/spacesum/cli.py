"""Command-line entry point: ``spacesum <subcommand> ...``.

Exit status is 0 when an instance was solved or decided, 2 when nothing
was found within the budget (or the optimisation is infeasible) and 1 on
errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .rand_oracle import normalize_seed

# subcommand -> required instance type (None: any)
TYPED = {"solve": None, "ld": "ld", "subsetsum": "subset_sum", "knapsack": "knapsack", "bip": "bip", "ksum": "ksum"}


def _seed(text: str) -> int:
    try:
        return normalize_seed(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad seed {text!r}") from exc


def _load_json(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return json.loads(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + ("" if text.endswith("\n") else "\n"))
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spacesum", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=_seed, default=None, help=f"master seed (default: ${harness.SEED_ENV})")
    # also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS, help="master seed, hex or decimal")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="generate an instance file")
    gen.add_argument("family", choices=harness.FAMILIES)
    gen.add_argument("-n", type=int, required=True)
    gen.add_argument("--param", action="append", default=[], metavar="KEY=VALUE", help="extra generator setting")
    gen.add_argument("--out", help="instance path (default: stdout)")
    gen.add_argument("--truth", help="sidecar path for the planted witness")

    for name in TYPED:
        what = "an instance" if name == "solve" else f"a {TYPED[name]} instance"
        p = sub.add_parser(name, parents=[common], help=f"solve {what}")
        if name == "ld":
            p.add_argument("--in", dest="inp", help="instance JSON ('-' for stdin)")
            p.add_argument("--x", help="JSON array file for x (with --y, instead of --in)")
            p.add_argument("--y", help="JSON array file for y")
        else:
            p.add_argument("--in", dest="inp", required=True, help="instance JSON ('-' for stdin)")
        p.add_argument("--out", help="report path (default: stdout)")
        p.add_argument("--oracle", action="store_true", help="cross-check against the exhaustive solver")
        p.add_argument("--budget", type=int, help="work budget for the search")
        if name in ("solve", "ld", "ksum"):
            p.add_argument("--s", type=int, help="space parameter")
        if name in ("solve", "ld"):
            p.add_argument("--p-bound", type=int, help="pseudo-solution bound (default: measured)")
        if name in ("solve", "subsetsum"):
            p.add_argument("--mode", choices=("auto", "small-range", "mitm"))
        if name == "ksum":
            p.add_argument("--mode", choices=("random", "mitm"), default="random")

    b = sub.add_parser("bench", parents=[common], help="run a benchmark suite")
    b.add_argument("--suite", required=True, help="suite JSON")
    b.add_argument("--csv", help="CSV path (default: stdout)")
    b.add_argument("--summary", help="JSON summary path")

    v = sub.add_parser("verify", parents=[common], help="check a report's witness against its instance")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--report", required=True)
    return parser


def _parse_param(items):
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise harness.InstanceError(f"expected KEY=VALUE, got {item!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    seed = args.seed if args.seed is not None else harness.default_seed()
    try:
        if args.command == "gen":
            params = {**_parse_param(args.param), "n": args.n}
            inst, truth = harness.generate(args.family, params, seed)
            _emit(json.dumps(inst), args.out)
            if args.truth and truth is not None:
                Path(args.truth).write_text(json.dumps(truth) + "\n")
            return 0
        if args.command == "bench":
            rows, summary = harness.bench(_load_json(args.suite), seed)
            _emit(harness.rows_to_csv(rows), args.csv)
            if args.summary:
                Path(args.summary).write_text(harness.dumps(summary) + "\n")
            return 0
        if args.command == "verify":
            ok, msg = harness.verify(_load_json(args.inp), _load_json(args.report))
            print(msg)
            return 0 if ok else 1
        if args.command == "ld" and args.inp is None:
            if not (args.x and args.y):
                raise harness.InstanceError("ld needs --in or both --x and --y")
            inst = {"type": "ld", "x": _load_json(args.x), "y": _load_json(args.y)}
        else:
            inst = _load_json(args.inp)
            if not isinstance(inst, dict):
                raise harness.InstanceError("instance must be a JSON object")
        want = TYPED[args.command]
        if want is not None and inst.get("type") != want:
            raise harness.InstanceError(f"expected a {want} instance, got {inst.get('type')!r}")
        flags = harness.Flags(
            s=getattr(args, "s", None),
            p_bound=getattr(args, "p_bound", None),
            mode=getattr(args, "mode", None),
            budget=args.budget,
            oracle=args.oracle,
        )
        report = harness.solve(inst, seed, flags)
        _emit(harness.dumps(report), args.out)
        return harness.EXIT_CODES[report["outcome"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        # json.JSONDecodeError is a ValueError
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
