"""Write region SVG/JSON for the worked examples at a few burst probabilities.

    python3 scripts/region_plots.py --out figures/
"""

import argparse
from fractions import Fraction
from pathlib import Path

from bursty_ic.capacity_ld import delta, region, sym_capacity
from bursty_ic.report import region_svg

CASES = {
    "toy": [(1, 1), (1, 3)],
    "example1": [(2, 2), (1, 3)],
    "example2": [(1, 1), (1, 4)],
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, cfgs in CASES.items():
        for p in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            reg = region(cfgs, p)
            stem = f"{name}_p{p.numerator}-{p.denominator}"
            title = f"{name}: delta={delta(cfgs)}, p={p}, C_sym={sym_capacity(cfgs, p)}"
            (out / f"{stem}.svg").write_text(region_svg(reg, title))
            (out / f"{stem}.json").write_text(reg.dumps())
            print(f"{stem}: C_sym={sym_capacity(cfgs, p)}")


if __name__ == "__main__":
    main()
