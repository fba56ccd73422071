"""Sweep surface data (a, b, r, q) over a grid and tabulate case and Lambda statistics."""
import argparse
import csv
import sys
from collections import Counter

from toricroots.surface import SurfaceData, ah_invariants, classify_surface, lambda_members
from toricroots.verify import surface_grid

INTERIOR = ("Case31", "Case32", "Case33")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-b", type=int, default=6)
    p.add_argument("--max-q", type=int, default=6)
    p.add_argument("--max-r", type=int, default=6)
    p.add_argument("--bound", type=int, default=20, help="cutoff for listing Lambda")
    p.add_argument("--csv", metavar="PATH", help="write one row per tuple")
    args = p.parse_args(argv)

    rows, tally = [], Counter()
    for a, b, r, q in surface_grid(args.max_b, args.max_q, args.max_r):
        sd = SurfaceData(a, b, r, q)
        tag = classify_surface(sd).tag
        tally[tag] += 1
        row = {"a": a, "b": b, "r": r, "q": q, "case": tag, "lambda_first": "",
               "p1_integral": "", "p2_integral": ""}
        if tag in INTERIOR:
            lam = lambda_members(sd, args.bound)
            inv = ah_invariants(sd)
            row.update(lambda_first="" if lam.first is None else lam.first,
                       p1_integral=inv["p1_integral"], p2_integral=inv["p2_integral"])
        rows.append(row)

    for tag in sorted(tally):
        print(f"{tag:8s} {tally[tag]}")
    if args.csv:
        out = sys.stdout if args.csv == "-" else open(args.csv, "w", newline="")
        w = csv.DictWriter(out, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    main()
