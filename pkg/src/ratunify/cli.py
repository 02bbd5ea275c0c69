"""Command line: ``ratunify FILE`` solves a problem file, ``ratunify --bench`` emits CSV."""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from .bench import bench, write_csv
from .eqsystem import BACKENDS
from .occurs import POLICIES
from .solve import SolveError, render, solve
from .syntax import ParseError, parse_problem

EXIT_OK, EXIT_NO, EXIT_PARSE = 0, 1, 2


def programs_dir() -> Path:
    return Path(str(resources.files("ratunify") / "data" / "programs"))


def _resolve(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    shipped = programs_dir() / (name if name.endswith(".rat") else name + ".rat")
    if shipped.exists():
        return shipped
    raise FileNotFoundError(name)


def _choices(value: str, allowed, what: str) -> list[str]:
    if value == "all":
        return list(allowed)
    out = [v.strip() for v in value.split(",") if v.strip()]
    for v in out:
        if v not in allowed:
            raise argparse.ArgumentTypeError(f"unknown {what} {v!r}")
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ratunify", description=__doc__)
    ap.add_argument("file", nargs="?", help="problem file, or the name of a shipped program")
    ap.add_argument("--backend", default=None,
                    help="classical|rank|varcmp (comma list or 'all' with --bench)")
    ap.add_argument("--occurs", default=None,
                    help="off|trivial|simple|full|mult|sqrt (comma list or 'all' with --bench)")
    ap.add_argument("--minimize", action="store_true", help="minimize systems before printing answers")
    ap.add_argument("--answers", type=int, default=1, metavar="N")
    ap.add_argument("--depth", type=int, default=32, metavar="K", help="verification depth for answers")
    ap.add_argument("--compress", action="store_true", help="standalone path-compression mode")
    ap.add_argument("--max-steps", type=int, default=None)
    ap.add_argument("--bench", nargs="?", const="", default=None, metavar="SUITE",
                    help="benchmark a directory of problem files (default: shipped programs)")
    ap.add_argument("--repeat", type=int, default=1, metavar="R")
    ap.add_argument("--warmup", type=int, default=0)
    ap.add_argument("--timeout-ms", type=int, default=None, metavar="T")
    ap.add_argument("-o", "--output", default=None, help="CSV output path (default stdout)")
    return ap


def main(argv=None) -> int:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        backends = _choices(args.backend or ("all" if args.bench is not None else "classical"),
                            BACKENDS, "backend")
        policies = _choices(args.occurs or ("all" if args.bench is not None else "trivial"),
                            POLICIES, "occurs policy")
    except argparse.ArgumentTypeError as e:
        ap.error(str(e))

    if args.bench is not None:
        if args.compress:
            ap.error("--compress cannot be combined with --bench")
        suite = args.bench or args.file or str(programs_dir())
        try:
            records = bench(suite, backends, policies, (False, True) if args.minimize else (False,),
                            args.answers, args.repeat, args.warmup, args.timeout_ms)
        except ParseError as e:
            print(f"parse error: {e}", file=sys.stderr)
            return EXIT_PARSE
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                write_csv(records, fh)
        else:
            write_csv(records, sys.stdout)
        return EXIT_OK

    if args.file is None:
        ap.error("a problem file is required")
    if len(backends) != 1 or len(policies) != 1:
        ap.error("lists of backends/policies are only accepted with --bench")
    try:
        path = _resolve(args.file)
        pf = parse_problem(path.read_text(encoding="utf-8"), path.stem)
    except FileNotFoundError:
        print(f"no such file: {args.file}", file=sys.stderr)
        return EXIT_PARSE
    except ParseError as e:
        print(f"parse error at {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        sol = solve(pf, backends[0], policies[0], args.minimize, args.answers, args.depth,
                    args.compress, args.max_steps,
                    None if args.timeout_ms is None else args.timeout_ms / 1000)
    except SolveError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(render(sol))
    return EXIT_OK if sol.ok else EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
