import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscdecay.cutoffs import CutoffKind, CutoffSpec, annular_piece, bump, partition_sum, smooth_step
from oscdecay.homfn import Weights


def test_bump_profile():
    assert bump(0.0) == 1.0
    assert bump(np.array([-1.0, 1.0, 1.5])).tolist() == [0.0, 0.0, 0.0]
    u = np.linspace(-0.999, 0.999, 101)
    assert np.all((bump(u) > 0) & (bump(u) <= 1))


@given(st.floats(-3, 3))
def test_step_and_piece_ranges(v):
    assert 0 <= smooth_step(v) <= 1
    assert smooth_step(v) + smooth_step(1 - v) == pytest.approx(1, abs=1e-15)
    p = annular_piece(v)
    assert 0 <= p <= 1 and (p == 0 if not 0 < v < 2 else True)


@pytest.mark.parametrize("kappa", [("1/2", "1/2"), ("1/4", "1/2"), ("1/6", "1/6"), ("1", "1/3")])
def test_partition_of_unity(kappa):
    w = Weights(*kappa)
    rr = 2.0 ** np.linspace(-20, 0, 401)[:-1]
    ang = np.linspace(0, 2 * np.pi, 7)
    R, A = np.meshgrid(rr, ang)
    k1, k2 = w.as_floats()
    total = partition_sum(R**k1 * np.cos(A), R**k2 * np.sin(A), w, range(0, 40))
    assert np.max(np.abs(total - 1)) <= 1e-10


def test_cutoff_support_and_json():
    c = CutoffSpec(CutoffKind.RADIAL, (0.0, 1.0), 0.25, 2.0)
    w = Weights("1/4", "1/2")
    assert c(0.0, 1.0, w) == 2.0
    assert c(0.3, 1.0, w) == 0.0
    assert c.support_box(w) == (-0.25, 0.25, 0.75, 1.25)
    assert CutoffSpec.from_json(c.to_json()) == c
    prod = CutoffSpec("product_bump", (0, 0), 0.8)
    assert prod(0.7, 0.7, w) == pytest.approx(bump(0.875) ** 2)


def test_annular_cutoff_lives_on_one_annulus():
    w = Weights("1/4", "1/2")
    c = CutoffSpec(CutoffKind.ANNULAR, radius=1.0)
    # on the x2 axis r = x2^2, and the piece lives on 1 <= r <= 4
    assert c(0.0, 0.5, w) == 0.0
    assert c(0.0, 1.5, w) > 0
    assert c(0.0, 2.5, w) == 0.0


def test_bad_radius():
    with pytest.raises(ValueError):
        CutoffSpec(radius=0.0)
