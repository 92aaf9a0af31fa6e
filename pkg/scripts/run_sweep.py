"""Sweep l_p (1 < p < inf) for surviving norming-order-unit candidates.

    python3 scripts/run_sweep.py --p 1.25,1.5,2,3,4 --dim 4 --candidates 20 --out sweep.csv

A survivor is a candidate for which no witness was found within the budget;
zero survivors is evidence, not proof, that l_p has no norming order unit.
"""

import argparse
import csv
import time

from orderunit.nou import default_workers, p_sweep
from orderunit.report import fmt_real


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", default="1.25,1.5,2,3,4")
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--candidates", type=int, default=20)
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", help="CSV file for the per-p table")
    args = ap.parse_args()

    grid = [float(s) for s in args.p.split(",") if s.strip()]
    t0 = time.perf_counter()
    rep = p_sweep(grid, args.dim, args.candidates, args.budget, args.seed, workers=args.workers or default_workers())
    took = time.perf_counter() - t0

    fields = ("p", "dim", "candidates", "witnesses", "survivors", "verdict")
    print(" ".join(f"{f:>12}" for f in fields[:-1]), " verdict")
    for row in rep.data["per_p"]:
        print(" ".join(f"{row[f]:>12}" for f in fields[:-1]), "", row["verdict"])
    for note in rep.notes:
        print("note:", note)
    print(f"{took:.2f}s")

    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\r\n")
            w.writerow(fields + ("min_consequent_slack",))
            for row in rep.data["per_p"]:
                slack = min((r["witness"].consequent_value for r in row["results"] if r["witness"]), default=float("nan"))
                w.writerow([row[f] for f in fields] + [fmt_real(slack)])


if __name__ == "__main__":
    main()
