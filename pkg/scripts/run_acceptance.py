"""Run every verification suite and print one PASS/FAIL line per suite."""
import argparse
import json
import sys
import time

from toricroots.verify import SUITES, run_suite


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", nargs="*", choices=sorted(SUITES))
    p.add_argument("--details", action="store_true", help="dump suite details as JSON")
    args = p.parse_args(argv)
    failed = 0
    for name in args.only or SUITES:
        t0 = time.perf_counter()
        res = run_suite(name, seed=args.seed)
        print(f"{'PASS' if res.passed else 'FAIL'}  {name:18s} {time.perf_counter() - t0:6.1f}s",
              flush=True)
        if args.details:
            print(json.dumps(res.details, default=str, indent=1))
        failed += not res.passed
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
