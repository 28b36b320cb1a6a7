"""Empirical test counts of the two-stage scheme as the population grows.

For a fixed design rate the number of stage-1 tests is ceil(log2 t / rate);
the interesting quantity is how the stage-2 retest count behaves.
"""

import argparse
import json

from gtlab.experiment import ExperimentConfig, default_weight, run_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--rate", type=float, default=0.4)
    p.add_argument("--mode", choices=["full", "partial"], default="full")
    p.add_argument("--log-t", type=int, nargs="+", default=[6, 8, 10, 12, 14])
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print full reports")
    args = p.parse_args()

    w = default_weight(args.s, args.mode)
    for lt in args.log_t:
        config = ExperimentConfig.from_rate(2**lt, args.s, args.rate, w=w, mode=args.mode,
                                            trials=args.trials, seed=args.seed)
        report = run_experiment(config)
        if args.json:
            print(json.dumps(report.to_dict(deterministic=True)))
            continue
        worst = max(report.stage2_histogram, default=0)
        print(f"t=2^{lt:<3} N={config.N:<4} success={report.successes}/{report.trials} "
              f"worst stage2={worst:<3} mean total={report.mean_total_tests:.2f} "
              f"worst-case rate={report.empirical_rate:.4f}")


if __name__ == "__main__":
    main()
