"""Print Hom(X, Y[i]) for every pair of objects in a problem file."""
import argparse
from pathlib import Path

from derivedcells.derived import derived_hom
from derivedcells.serialize import load_problem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("problem", type=Path)
    ap.add_argument("--lo", type=int, default=-1)
    ap.add_argument("--hi", type=int, default=2)
    args = ap.parse_args()
    prob = load_problem(args.problem.read_text())
    degrees = range(args.lo, args.hi + 1)
    width = max(len(name) for name in prob.objects) * 2 + 4
    print(f"{'':<{width}}" + "".join(f"{i:>8}" for i in degrees))
    for a, X in prob.objects.items():
        for b, Y in prob.objects.items():
            cells = "".join(f"{str(derived_hom(X, Y, i)):>8}" for i in degrees)
            print(f"{a + ' -> ' + b:<{width}}{cells}")


if __name__ == "__main__":
    main()
