#!/usr/bin/env python3
"""Scaling exponents across the static phase plane, one line per point.

Estimates alpha* on a few representative (p, rho) cells and compares the
resulting symbol (cross / dot / square) with the closed-form regime
classification.  Finishes in under a minute.
"""

import argparse

from rwre.estimators import classify_exponent, estimate_scaling
from rwre.oracles import classify_regime, kks_exponent
from rwre.params import ModelParams
from rwre.simulator import run

POINTS = (
    (0.52, 0.80),   # deep diffusive
    (0.70, 0.75),   # super-diffusive leaf
    (0.80, 0.55),   # sub-diffusive zero-speed band
    (0.85, 0.50),   # recurrent line
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'p':>5} {'rho':>5} {'s':>7} {'alpha*':>8} {'symbol':>7}  regime")
    for p, rho in POINTS:
        params = ModelParams(p=p, rho=rho, env="static")
        batches = [run(params, 1 << N, args.samples, seed=args.seed,
                       stream_base=i * args.samples)
                   for i, N in enumerate((10, 12, 14))]
        est = estimate_scaling(batches)
        regime = classify_regime(p, rho)
        s = f"{kks_exponent(p, rho):.3f}" if rho > 0.5 else "0"
        print(f"{p:>5.2f} {rho:>5.2f} {s:>7} {est.alpha_star:>8.4f} "
              f"{classify_exponent(est.alpha_star):>7}  {regime.label.value} "
              f"({regime.order})")


if __name__ == "__main__":
    main()
