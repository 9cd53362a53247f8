"""Fitted decay slopes for surfaces with known exponents.

    python scripts/calibrate_decay.py [--hi-exp 14] [--points 21]

Prints one line per case: fitted slope, expected slope, fit residual.
"""

import argparse
from dataclasses import dataclass

from oscdecay import decayfit
from oscdecay.cutoffs import CutoffSpec
from oscdecay.homfn import MixedHomPoly, Weights
from oscdecay.oscquad import SurfaceSpec


@dataclass(frozen=True)
class Case:
    name: str
    monomials: tuple
    weights: tuple
    cutoff: CutoffSpec
    expected: float

    def spec(self) -> SurfaceSpec:
        kappa = Weights(*self.weights)
        return SurfaceSpec(MixedHomPoly(list(self.monomials), kappa), self.cutoff)


CASES = (
    Case("paraboloid", ((2, 0, 1), (0, 2, 1)), ("1/2", "1/2"), CutoffSpec("radial_bump", (0, 0), 0.5), -1.0),
    Case("sextic", ((6, 0, 1), (0, 6, 1)), ("1/6", "1/6"), CutoffSpec("product_bump", (0, 0), 0.8), -1 / 3),
    Case("quartic_saddle", ((4, 0, 1), (0, 4, -1)), ("1/4", "1/4"), CutoffSpec("radial_bump", (0, 0), 0.5), -0.5),
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lo-exp", type=float, default=4)
    ap.add_argument("--hi-exp", type=float, default=14)
    ap.add_argument("--points", type=int, default=21)
    args = ap.parse_args()
    grid = decayfit.geometric_grid(args.lo_exp, args.hi_exp, args.points)
    for case in CASES:
        fit = decayfit.fit_decay_exponent(case.spec(), t_grid=grid)
        print(f"{case.name:16s} slope {fit.slope:+.4f}  expected {case.expected:+.4f}  rms {fit.residual_rms:.3f}")


if __name__ == "__main__":
    main()
