"""Fiber sizes for the subtorus {(s1, s1, s2)} of the 3-dimensional torus acting on A^3.

Prints one row per T-root in the box together with its certified fiber count.
"""
import argparse

from toricroots.restriction import SubtorusRestriction, classify, cremona_setup


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--bound", type=int, default=6)
    args = p.parse_args(argv)
    cone, _ = cremona_setup(3)
    s = SubtorusRestriction(((1, 1, 0), (0, 0, 1)))
    rep = classify(s, cone, args.bound)
    print(f"position: {rep.position.tag}")
    print(f"{'t-root':>10}  count  class")
    for t in sorted(rep.fibers):
        f = rep.fibers[t]
        print(f"{str(t):>10}  {f.count!s:>5}  {f.cardinality_class}")


if __name__ == "__main__":
    main()
