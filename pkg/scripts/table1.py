"""Recompute the two-stage rate bounds and compare with the published table."""

import argparse
import time

from gtlab import rates


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-6)
    args = p.parse_args()

    print(f"{'s':>3} {'computed':>10} {'published':>10} {'old':>7} {'w*':>9} {'sec':>6}")
    for s in (2, 3, 4, 5, 6):
        start = time.perf_counter()
        res = rates.theorem2_bound(s, w_grid=args.grid, q_grid=args.grid, tol=args.tol)
        published = rates.TABLE1_NEW.get(s, 0.5)
        old = rates.TABLE1_OLD.get(s)
        print(f"{s:>3} {res.value:>10.5f} {published:>10} {old if old else '-':>7} "
              f"{res.w_star:>9.5f} {time.perf_counter() - start:>6.1f}")

    print("\npartial recovery (s//2 + 1 of s):")
    for s in range(2, 9):
        res = rates.partial_bound(s, w_grid=args.grid, q_grid=args.grid, tol=args.tol)
        print(f"{s:>3} {res.value:>10.6f}  1/s={1 / s:.6f}  w*={res.w_star:.5f}")


if __name__ == "__main__":
    main()
