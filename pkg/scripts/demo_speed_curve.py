#!/usr/bin/env python3
"""Speed of the static-environment walk versus density, against theory.

Runs a small Monte Carlo ladder at fixed bias and prints simulated speed
next to the closed-form value, including the zero-speed band below the
bias.  Finishes in a few seconds.
"""

import argparse

from rwre.estimators import estimate_speed
from rwre.oracles import static_speed
from rwre.params import ModelParams
from rwre.simulator import run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.7)
    ap.add_argument("--n-log2", type=int, default=12)
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    n = 1 << args.n_log2
    print(f"static walk, p = {args.p}, n = 2^{args.n_log2}, M = {args.samples}")
    print(f"{'rho':>6} {'v_n':>10} {'theory':>10} {'stderr':>9}")
    for k in range(2, 20):
        rho = k / 20
        sample = run(ModelParams(p=args.p, rho=rho, env="static"),
                     n, args.samples, seed=args.seed)
        est = estimate_speed(sample)
        print(f"{rho:>6.2f} {est.v_n:>10.5f} {static_speed(args.p, rho):>10.5f} "
              f"{est.stderr:>9.5f}")


if __name__ == "__main__":
    main()
