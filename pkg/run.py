"""Run the acceptance grid."""
from __future__ import annotations

import argparse

from cli import GRID_MAX_LENGTH, GRID_PRESETS, main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description="Run the acceptance grid over the shipped presets")
    parser.add_argument("--presets", nargs="+", default=list(GRID_PRESETS), help="Presets to check (default: %(default)s)")
    parser.add_argument("--max-length", type=int, default=GRID_MAX_LENGTH, help="Largest length of t^mu (default: %(default)s)")
    parser.add_argument("--jobs", type=int, default=1, help="Worker threads (default: %(default)s)")
    parser.add_argument("--cache", help="Class-polynomial cache directory; reruns resume from it")
    parser.add_argument("--json", action="store_true", help="Write JSON instead of a table")
    args = parser.parse_args()

    argv = ["grid", "--presets", *args.presets, "--max-length", str(args.max_length), "--jobs", str(args.jobs)]
    if args.cache:
        argv += ["--cache", args.cache]
    if args.json:
        argv.append("--json")
    return cli_main(argv)


if __name__ == '__main__':
    raise SystemExit(main())
