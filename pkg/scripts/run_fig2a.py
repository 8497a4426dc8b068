"""RF error over mtry = 1..6 against tuned INTF on pure-3 (n = 1000).

Writes the per-setting means as CSV for external plotting.

    python3 scripts/run_fig2a.py --reps 20 --seed 3 --out results/fig2a
"""
import argparse
import logging

from puretrees.simbench.suites import suite_fig2a


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--threads", type=int)
    ap.add_argument("--out", default="results/fig2a")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    report = suite_fig2a(args.reps, args.seed, args.n, args.threads, log=logging.info)
    for row in report.rows:
        print(f"{row.label:>9s}  {row.mean_mse:.3f} ({row.sd_mse:.3f})")
    print("wrote", *report.write(args.out))


if __name__ == "__main__":
    main()
