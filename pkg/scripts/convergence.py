"""Gap to the formula as the run length grows.

    python3 scripts/convergence.py [--trials 3]
"""

import argparse
from fractions import Fraction

from bursty_ic.sim_harness import SchemeSpec, convergence_sweep

HALF = Fraction(1, 2)

SWEEPS = [
    ("single_weak (2,1)", SchemeSpec("single_weak", [(2, 1)], HALF), [12_500, 50_000, 200_000]),
    ("bursty_relay (1,3)", SchemeSpec("bursty_relay", [(1, 3)], HALF, blocks=20),
     [1_000, 10_000, 100_000]),
    ("multicarrier toy", SchemeSpec("multicarrier", [(1, 1), (1, 3)], HALF, blocks=20),
     [500, 1_000, 2_000, 5_000]),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for name, spec, sizes in SWEEPS:
        tab = convergence_sweep(spec, sizes, args.trials, args.seed)
        print(f"{name}  monotone={tab.monotone}")
        for size, mean, gap in tab.rows:
            print(f"  size={size:>7}  mean_r1={mean:.5f}  gap={gap:.3%}")


if __name__ == "__main__":
    main()
