"""
Rerun the randomized cases under many seeds and report the worst residual
ratio seen per case.  A ratio above 1 means some seed failed the case.
"""

import argparse
import sys

from hardyconj.verify_cli import REGISTRY, RunOptions, run_case


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seeds", type=int, default=20, help="number of seeds (0 .. seeds-1)")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("ids", nargs="*", help="case ids (default: all)")
    args = p.parse_args(argv)

    ids = args.ids or list(REGISTRY)
    bad = 0
    for cid in ids:
        worst_ratio, worst_name, failures = 0.0, None, []
        for seed in range(args.seeds):
            res = run_case(cid, RunOptions(seed=seed, trials=args.trials))
            if res.verdict != "pass":
                failures.append(seed)
            for k, v in res.residuals.items():
                t = res.tolerances[k]
                ratio = v / t if t > 0 else (0.0 if v == 0 else float("inf"))
                if ratio > worst_ratio:
                    worst_ratio, worst_name = ratio, k
        bad += bool(failures)
        flag = f" FAILED seeds={failures}" if failures else ""
        print(f"{cid:20s} worst/tol={worst_ratio:.2e} ({worst_name}){flag}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
