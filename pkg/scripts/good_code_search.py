"""Search seeds for a small (s, L, K)-good stage-1 matrix and save the best one."""

import argparse

from gtlab.certify import is_good_code, outcome_groups
from gtlab.design import gen_matrix, recommended_weight


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=18)
    p.add_argument("--t", type=int, default=20)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--weight", type=float)
    p.add_argument("--out")
    args = p.parse_args()

    w = args.weight or recommended_weight(args.s, "full")
    K = range(args.s)
    best = None
    for seed in range(args.seeds):
        X = gen_matrix(args.n, args.t, w, seed)
        worst = max(len(e) for e in outcome_groups(X, args.s).values())
        report = is_good_code(X, args.s, args.L, K)
        print(f"seed={seed:<4} good={report.is_good!s:<5} largest hypergraph={worst}")
        if report.is_good and (best is None or worst < best[0]):
            best = (worst, seed, X)
    if best is None:
        print("no good matrix found")
        return
    print(f"best seed {best[1]} (largest candidate hypergraph {best[0]} edges)")
    if args.out:
        best[2].save(args.out)


if __name__ == "__main__":
    main()
