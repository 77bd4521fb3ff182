"""How sharp is the step limit tau <= r^2?  Sweep tau/r^2 and count violations.

Above the limit nothing is guaranteed, so every row past 1.0 is
informational.
"""
import argparse

import numpy as np

from sife.flows import FlowParams
from sife.harness import CSV_FIELDS, check_maxmin, check_monotonicity
from sife.io import property_results_csv
from sife.morphology import StructuringRadius


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=float, default=0.5)
    ap.add_argument("--factors", type=float, nargs="+", default=[0.5, 1.0, 1.5, 2.0, 3.0, 4.0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--iterations", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv")
    args = ap.parse_args()

    results = []
    with np.errstate(all="ignore"):
        for k in args.factors:
            p = FlowParams("sife", tau=k * args.r ** 2, sr=StructuringRadius(args.r), iterations=args.iterations)
            tag = f"r{args.r:g}-x{k:g}"
            for res in (check_monotonicity(p, args.seed, args.trials, guaranteed=False, name=f"mono-1d-{tag}"),
                        check_maxmin(p, 1, args.seed, args.trials, guaranteed=False, name=f"maxmin-1d-{tag}"),
                        check_maxmin(p, 2, args.seed, args.trials, size=32, guaranteed=False,
                                     name=f"maxmin-2d-{tag}")):
                results.append(res)
                print(f"{res.name:<24} failures {res.failures:>4}/{res.trials}  worst {res.worst:.3e}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(property_results_csv(results))
        print(f"wrote {len(results)} rows ({', '.join(CSV_FIELDS)}) to {args.csv}")


if __name__ == "__main__":
    main()
