"""Pure-3 comparison of all algorithms at their tuned settings.

    python3 scripts/run_table1.py --reps 20 --seed 3 --out results/table1
"""
import argparse
import logging

from puretrees.simbench.suites import suite_table1


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--threads", type=int)
    ap.add_argument("--out", default="results/table1")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    report = suite_table1(args.reps, args.seed, args.threads, log=logging.info)
    for row in report.rows:
        print(f"{row.label:>8s}  {row.mean_mse:.3f} ({row.sd_mse:.3f})")
    print("wrote", *report.write(args.out))


if __name__ == "__main__":
    main()
