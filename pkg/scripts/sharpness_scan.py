"""Verdict of the sharpness experiment across a range of exponents p.

    python scripts/sharpness_scan.py --lo 1.2 --hi 3.0 --steps 10

The verdict should flip from Diverges to Bounded near the height h = 2 of
x1^2 x2.  Prints p, variant, last increment ratio and verdict.
"""

import argparse

import numpy as np

from oscdecay import maxop
from oscdecay.homfn import MixedHomPoly, Weights, height
from oscdecay.oscquad import SurfaceSpec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lo", type=float, default=1.2)
    ap.add_argument("--hi", type=float, default=3.0)
    ap.add_argument("--steps", type=int, default=10)
    ap.add_argument("--variant", choices=[v.value for v in maxop.Variant], default=None)
    args = ap.parse_args()
    f = MixedHomPoly([(2, 1, 1)], Weights("1/4", "1/2"))
    spec = SurfaceSpec(f, maxop.sharpness_cutoff(), 1.0)
    print(f"height {height(f)}")
    for p in np.linspace(args.lo, args.hi, args.steps):
        rep = maxop.sharpness_experiment(spec, float(p), variant=args.variant)
        print(f"p={p:.3f} {rep.variant.value:8s} last ratio {rep.increment_ratios[-1]:.4f} {rep.verdict.value}")


if __name__ == "__main__":
    main()
