"""Wall-clock per flow on a blurred random 512x512 image, 50 iterations."""
import argparse
import statistics
import time

import numpy as np

from sife.flows import FLOWS, FlowParams, run_flow
from sife.grid import Image2D
from sife.harness import random_fields


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=512)
    ap.add_argument("--iterations", type=int, default=50)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    u = random_fields(np.random.default_rng(args.seed), 2, (args.size, args.size), smooth_sigma=3.0)[1]
    img = Image2D(u)
    for flow in FLOWS:
        params = FlowParams(flow, iterations=args.iterations, converge_eps=None)
        times = []
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            run_flow(img, params)
            times.append(time.perf_counter() - t0)
        print(f"{flow:<6} {args.size}x{args.size} {args.iterations} it: "
              f"median {statistics.median(times):.3f} s, best {min(times):.3f} s")


if __name__ == "__main__":
    main()
