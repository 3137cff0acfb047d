"""Run the whole case registry and write text and structured reports side by side."""

import argparse
import sys
from pathlib import Path

from hardyconj.verify_cli import REGISTRY, RunOptions, run_case
from hardyconj.verify_cli.cli import emit_report, exit_status
from hardyconj.verify_cli.registry import DEFAULT_SEED


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Path("reports"), help="directory for registry.txt / registry.json")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--trials", type=int, default=100)
    args = p.parse_args(argv)

    opts = RunOptions(seed=args.seed, trials=args.trials)
    results = [run_case(c, opts) for c in REGISTRY]
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "registry.txt", "w", encoding="utf-8") as fh:
        emit_report(results, "text", fh)
    with open(args.out / "registry.json", "w", encoding="utf-8") as fh:
        emit_report(results, "structured", fh)
    emit_report(results, "text", sys.stdout)
    return exit_status(results)


if __name__ == "__main__":
    sys.exit(main())
