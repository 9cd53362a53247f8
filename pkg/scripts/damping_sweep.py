"""Fitted decay slope of the damped cubic x1^2 x2 as the damping power varies.

    python scripts/damping_sweep.py --alphas 0 0.05 0.1 0.2 --sigma 0 0

Without damping the slope sits near -1/2 on the critical direction; any
alpha above 1/2 - 1/h (= 0 here) should keep it at or below -1/2.
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from oscdecay import decayfit
from oscdecay.cutoffs import CutoffSpec
from oscdecay.homfn import DampingSpec, MixedHomPoly, Weights, critical_directions
from oscdecay.oscquad import SurfaceSpec


@dataclass(frozen=True)
class SweepConfig:
    alphas: tuple[float, ...] = (0.0, 0.05, 0.1, 0.2)
    sigma: tuple[float, float] = (0.0, 0.0)
    radius: float = 0.25
    points: int = 21


def cubic_spec(alpha: float, radius: float) -> SurfaceSpec:
    f = MixedHomPoly([(2, 1, 1)], Weights("1/4", "1/2"))
    up = next(d for d in critical_directions(f) if d.theta[1] > 0)
    return SurfaceSpec(f, CutoffSpec("radial_bump", (0.0, 1.0), radius), 0.0, alpha, DampingSpec.gradient_power(up))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alphas", type=float, nargs="+", default=list(SweepConfig.alphas))
    ap.add_argument("--sigma", type=float, nargs=2, default=list(SweepConfig.sigma))
    ap.add_argument("--radius", type=float, default=SweepConfig.radius)
    args = ap.parse_args()
    cfg = SweepConfig(tuple(args.alphas), tuple(args.sigma), args.radius)
    grid = decayfit.geometric_grid(4, 14, cfg.points)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["alpha", "slope", "rms", "used"])
    for a in cfg.alphas:
        fit = decayfit.fit_decay_exponent(cubic_spec(a, cfg.radius), cfg.sigma, grid)
        out.writerow([a, f"{fit.slope:.5f}", f"{fit.residual_rms:.4f}", fit.used])


if __name__ == "__main__":
    main()
