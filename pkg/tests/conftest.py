from fractions import Fraction as F

import pytest
from hypothesis import settings

from oscdecay.cutoffs import CutoffSpec
from oscdecay.homfn import DampingMode, DampingSpec, MixedHomPoly, Weights, critical_directions
from oscdecay.oscquad import SurfaceSpec

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def poly(monos, k1, k2):
    return MixedHomPoly(monos, Weights(F(k1), F(k2)))


@pytest.fixture
def paraboloid():
    return poly([(2, 0, 1), (0, 2, 1)], "1/2", "1/2")


@pytest.fixture
def cubic():
    """x1^2 x2, weights (1/4, 1/2): critical directions (0, +-1) of order 2."""
    return poly([(2, 1, 1)], "1/4", "1/2")


@pytest.fixture
def quartic():
    return poly([(4, 0, 1), (0, 4, -1)], "1/4", "1/4")


@pytest.fixture
def sextic():
    return poly([(6, 0, 1), (0, 6, 1)], "1/6", "1/6")


def cubic_damped_spec(alpha=0.1, radius=0.25):
    f = poly([(2, 1, 1)], "1/4", "1/2")
    up = [d for d in critical_directions(f) if d.theta[1] > 0][0]
    return SurfaceSpec(f, CutoffSpec("radial_bump", (0.0, 1.0), radius), 0.0, alpha, DampingSpec.gradient_power(up))


def matrix_specs():
    """The three surfaces of the dyadic-versus-oracle comparison."""
    par = SurfaceSpec(poly([(2, 0, 1), (0, 2, 1)], "1/2", "1/2"), CutoffSpec("radial_bump", (0, 0), 0.5))
    cub = cubic_damped_spec(alpha=1.0, radius=0.3)
    qu = SurfaceSpec(
        poly([(4, 0, 1), (0, 4, -1)], "1/4", "1/4"),
        CutoffSpec("radial_bump", (0, 0), 0.5),
        0.0,
        1.0,
        DampingSpec(DampingMode.POLAR_RADIUS),
    )
    return {"paraboloid": par, "cubic_damped": cub, "quartic_radial": qu}
