import csv
import io
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscdecay.cutoffs import CutoffSpec
from oscdecay.decayfit import (
    Sample,
    fit_decay_exponent,
    fit_samples,
    geometric_grid,
    height_threshold,
    sample_decay,
    sigma_square,
    uniform_decay_sweep,
)
from oscdecay.errors import DomainError, InsufficientDataError
from oscdecay.oscquad import SurfaceSpec

from conftest import cubic_damped_spec, poly


def power_law(c, beta, ts, err=0.0):
    return [Sample(t, c * t ** (-beta), err) for t in ts]


@given(st.floats(0.01, 100), st.floats(0.05, 4))
def test_exact_power_law(c, beta):
    fit = fit_samples(power_law(c, beta, geometric_grid()))
    assert fit.slope == pytest.approx(-beta, abs=1e-6)
    assert fit.residual_rms < 1e-9 and fit.reliable


@given(st.floats(0.05, 3), st.integers(0, 2**32 - 1))
def test_slope_ignores_amplitude_scale(beta, seed):
    rng = np.random.default_rng(seed)
    ts = geometric_grid()
    mods = ts ** (-beta) * np.exp(rng.normal(0, 0.1, ts.size))
    a = fit_samples([Sample(t, m, 0.0) for t, m in zip(ts, mods)])
    b = fit_samples([Sample(t, 2 * m, 0.0) for t, m in zip(ts, mods)])
    assert b.slope == pytest.approx(a.slope, abs=1e-9)
    assert b.intercept == pytest.approx(a.intercept + np.log(2), abs=1e-9)


def test_tail_selection_and_noise_filter():
    ts = geometric_grid(0, 10, 11)
    samples = power_law(1.0, 1.0, ts[:6]) + power_law(1.0, 2.0, ts[6:])
    fit = fit_samples(samples, tail_fraction=0.4)
    assert fit.slope == pytest.approx(-2.0, abs=1e-9)
    # samples buried under their error estimate are not used
    noisy = power_law(1.0, 1.0, ts[:8]) + [Sample(t, 1e-12, 1e-12) for t in ts[8:]]
    kept = fit_samples(noisy, tail_fraction=0.7)
    assert kept.used == 5 and kept.slope == pytest.approx(-1.0, abs=1e-9)
    with pytest.raises(InsufficientDataError):
        fit_samples(noisy, tail_fraction=0.3)


def test_bad_tail_fraction():
    with pytest.raises(DomainError):
        fit_samples(power_law(1, 1, geometric_grid()), tail_fraction=0.0)


def test_grid_requirements(paraboloid):
    spec = SurfaceSpec(paraboloid, CutoffSpec("radial_bump", (0, 0), 0.5))
    with pytest.raises(DomainError):
        fit_decay_exponent(spec, t_grid=geometric_grid(4, 8, 21))
    with pytest.raises(DomainError):
        fit_decay_exponent(spec, t_grid=geometric_grid(4, 14, 5))


def test_grid_refinement_barely_moves_paraboloid_slope(paraboloid):
    spec = SurfaceSpec(paraboloid, CutoffSpec("radial_bump", (0, 0), 0.5))
    coarse = fit_samples(sample_decay(spec, (0, 0), geometric_grid(2, 12, 11)))
    fine = fit_samples(sample_decay(spec, (0, 0), geometric_grid(2, 12, 21)))
    assert abs(coarse.slope - fine.slope) <= 0.02
    assert coarse.slope == pytest.approx(-1.0, abs=0.1)


def test_height_thresholds(cubic, sextic):
    assert height_threshold(SurfaceSpec(cubic)) == 0
    assert height_threshold(SurfaceSpec(sextic)) == F(1, 6)


def _fake_sampler(slopes):
    ts = geometric_grid()
    return lambda sig: power_law(1.0, -slopes(sig), ts)


def test_sweep_picks_worst_and_is_monotone_under_refinement():
    spec = cubic_damped_spec()
    slope = lambda sig: -0.6 + 0.1 * sig[0] ** 2 + 0.05 * sig[1]
    coarse = sigma_square(points=3)
    fine = sigma_square(points=5)
    a = uniform_decay_sweep(spec, coarse, threshold=-0.5, sampler=_fake_sampler(slope))
    b = uniform_decay_sweep(spec, fine, threshold=-0.5, sampler=_fake_sampler(slope))
    assert set(coarse) <= set(fine)
    assert b.worst_slope >= a.worst_slope
    assert a.worst_slope == pytest.approx(slope(a.worst_sigma))
    assert a.pass_ and a.alpha_inside is True


def test_sweep_failure_and_boundary():
    spec = cubic_damped_spec().with_alpha(0.0)
    rep = uniform_decay_sweep(spec, [(0, 0)], threshold=-0.5, slack=0.05, sampler=_fake_sampler(lambda s: -0.4))
    assert not rep.pass_
    # alpha = 0 sits exactly on 1/2 - 1/h = 0: outside the strict hypothesis
    assert rep.alpha_inside is False


def test_sweep_records_unresolvable_sigma():
    spec = cubic_damped_spec()
    ts = geometric_grid()

    def sampler(sig):
        if sig == (1.0, 1.0):
            return [Sample(t, 1e-20, 1e-16) for t in ts]
        return power_law(1.0, 0.7, ts)

    rep = uniform_decay_sweep(spec, [(0.0, 0.0), (1.0, 1.0)], sampler=sampler)
    failed = [o for o in rep.per_sigma if o.fit is None]
    assert len(failed) == 1 and "InsufficientDataError" in failed[0].failure
    assert rep.worst_slope == pytest.approx(-0.7) and rep.pass_


def test_empty_sigma_grid():
    with pytest.raises(DomainError):
        uniform_decay_sweep(cubic_damped_spec(), [])


def test_csv_is_rfc4180():
    rep = uniform_decay_sweep(cubic_damped_spec(), sigma_square(points=2), sampler=_fake_sampler(lambda s: -0.7))
    text = rep.to_csv({"config_hash": "abc"})
    assert text.endswith("\r\n")
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["sigma1", "sigma2", "slope", "residual_rms", "n_samples", "pass", "config_hash"]
    assert len(rows) == 5 and rows[1][-1] == "abc"
