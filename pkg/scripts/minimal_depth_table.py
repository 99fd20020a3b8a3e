"""Print the certified minimal witness depth for F = Z/p^(A+1) over {Z/p}."""
import argparse
import time

from derivedcells.counterexample import minimal_depth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--max-bound", type=int, default=4)
    args = ap.parse_args()
    print(f"{'p':>3} {'A':>3} {'depth':>6} {'lower':>14} {'upper':>8} {'seconds':>8}")
    for p in args.primes:
        for A in range(1, args.max_bound + 1):
            t = time.perf_counter()
            m = minimal_depth(p, A)
            ok = not m.lower.replay() and not m.upper.replay()
            print(f"{p:>3} {A:>3} {m.value:>6} {m.lower.verdict:>14} {m.upper.status:>8} "
                  f"{time.perf_counter() - t:>8.3f}{'' if ok else '  REPLAY FAILED'}")


if __name__ == "__main__":
    main()
