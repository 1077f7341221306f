"""Command line entry point.

    onthego run <scenario> [--seed N] [--frames DIR] [--out DIR] [--schedule literal|constant]
    onthego validate <scenario>
    onthego batch [<dir>] [--out DIR] [--frames DIR] [--jobs N]

``<scenario>`` is a JSON file or the name of a bundled scenario. Exit codes:
0 ReachedGoal, 2 RoadBlocked, 3 ReplanCapExceeded, 1 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .replan import ConfigError
from .scenario import ScenarioError, bundled_names, bundled_path, execute, load_scenario

EXIT_USAGE = 1


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as RoadBlocked
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="onthego", description="Run on-the-go replanning scenarios.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one scenario")
    p.add_argument("scenario", help="scenario file or bundled name (%s)" % ", ".join(bundled_names()))
    p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p.add_argument("--frames", type=Path, default=None, metavar="DIR", help="write SVG frames here")
    p.add_argument("--out", type=Path, default=None, metavar="DIR", help="write log, envs and summary here")
    p.add_argument("--schedule", choices=("literal", "constant"), default=None)

    p = sub.add_parser("validate", help="load and check a scenario without running it")
    p.add_argument("scenario")

    p = sub.add_parser("batch", help="run every scenario file in a directory")
    p.add_argument("dir", nargs="?", type=Path, default=None, help="defaults to the bundled scenarios")
    p.add_argument("--out", type=Path, default=None, metavar="DIR")
    p.add_argument("--frames", type=Path, default=None, metavar="DIR")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    return parser


def _describe(sc) -> str:
    mode = sc.mode + ("" if sc.mode == "geometric" else f" {sc.steering}")
    return (
        f"{sc.name}: {sc.dim}-D, {len(sc.obstacles)} obstacles, case {sc.case.tag.value}, "
        f"T={sc.T}, schedule {sc.schedule}, seed {sc.seed}, {mode}"
    )


def _report_line(rep) -> str:
    return (
        f"{rep.scenario}: {rep.status.value} after {rep.steps} steps, {rep.replans} plans, "
        f"path length {rep.path_length:.3f}, {rep.env_versions} env versions, {rep.wall_clock:.2f} s"
    )


def cmd_run(args) -> int:
    sc = load_scenario(args.scenario)
    rep = execute(sc, args.out, args.frames, args.seed, args.schedule)
    print(_report_line(rep))
    for ev in rep.events:
        print(f"  {ev}")
    for path in rep.files:
        print(f"  wrote {path}")
    return rep.exit_code


def cmd_validate(args) -> int:
    sc = load_scenario(args.scenario)
    print("ok " + _describe(sc))
    return 0


def _batch_one(path: Path, out: Path | None, frames: Path | None):
    try:
        rep = execute(load_scenario(path), out, frames)
    except (ScenarioError, ConfigError) as exc:
        return path, None, str(exc)
    rep.outcome = None  # keep the result small for the worker pipe
    return path, rep, None


def cmd_batch(args) -> int:
    if args.dir is None:
        files = [bundled_path(n) for n in bundled_names()]
    else:
        if not args.dir.is_dir():
            raise ScenarioError(f"{args.dir}: not a directory")
        files = sorted(args.dir.glob("*.json"))
    if not files:
        raise ScenarioError(f"{args.dir}: no *.json scenario files")
    if args.jobs < 1:
        raise ScenarioError("--jobs must be at least 1")

    jobs = [(f, args.out, args.frames) for f in files]
    if args.jobs == 1:
        results = [_batch_one(*j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_one, *zip(*jobs)))

    failed = 0
    for path, rep, err in results:
        if err is not None:
            failed += 1
            print(f"{path.stem}: error: {err}")
        else:
            print(f"{_report_line(rep)} [exit {rep.exit_code}]")
    return EXIT_USAGE if failed else 0


COMMANDS = {"run": cmd_run, "validate": cmd_validate, "batch": cmd_batch}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ScenarioError, ConfigError) as exc:
        print(f"onthego: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
