import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oscdecay.cutoffs import CutoffSpec
from oscdecay.errors import DomainError
from oscdecay.oscquad import (
    Path,
    SurfaceSpec,
    dyadic_piece,
    dyadic_range,
    fourier_surface_measure,
    fourier_surface_measure_gradient,
    nonstationary_decay_probe,
    oscillatory_integral,
    quadrature_oracle,
    run_batch,
)

from conftest import cubic_damped_spec, matrix_specs, poly

# 1-D reductions from scripts/oracles.py (QUADPACK Fourier-weighted rules)
PARABOLOID_R05 = {
    0.0: 3.170280402818991e-01 + 0j,
    16.0: 1.297578280367228e-01 + 2.024414308639445e-01j,
    1024.0: 1.198405049309863e-05 + 3.068008387310662e-03j,
}
SEXTIC_PRODUCT_R08 = {
    0.0: 9.322293685124159e-01 + 0j,
    64.0: 6.367544093361307e-01 + 2.321383069147826e-01j,
    1024.0: 2.789201918565183e-01 + 1.407566450033241e-01j,
}


@pytest.fixture
def par_spec(paraboloid):
    return SurfaceSpec(paraboloid, CutoffSpec("radial_bump", (0, 0), 0.5))


@pytest.fixture
def sextic_spec(sextic):
    return SurfaceSpec(sextic, CutoffSpec("product_bump", (0, 0), 0.8))


@pytest.mark.parametrize("t", sorted(PARABOLOID_R05))
def test_paraboloid_against_radial_reduction(par_spec, t):
    res = oscillatory_integral(par_spec, t, tol=1e-13, rtol=1e-12)
    assert res.path is Path.DYADIC
    assert abs(res.value - PARABOLOID_R05[t]) <= 1e-11


def test_paraboloid_leading_term(par_spec):
    t = 1024.0
    v = oscillatory_integral(par_spec, t).value
    assert abs(v) * t / math.pi == pytest.approx(1.0, rel=0.1)


@pytest.mark.parametrize("t", sorted(SEXTIC_PRODUCT_R08))
def test_sextic_against_product_reduction(sextic_spec, t):
    res = oscillatory_integral(sextic_spec, t, tol=1e-13, rtol=1e-12)
    assert abs(res.value - SEXTIC_PRODUCT_R08[t]) <= 1e-6 * abs(SEXTIC_PRODUCT_R08[t])


def test_oracle_on_separable_case(sextic_spec):
    orc = quadrature_oracle(sextic_spec, 64.0, level=5)
    assert orc.converged
    assert abs(orc.value - SEXTIC_PRODUCT_R08[64.0]) <= 1e-6 * abs(SEXTIC_PRODUCT_R08[64.0])


def test_oracle_constant_integrand():
    spec = SurfaceSpec(poly([(2, 0, 1), (0, 2, 1)], "1/2", "1/2"), CutoffSpec("product_bump", (0, 0), 1.0))
    ones = lambda x1, x2: np.ones(np.broadcast(x1, x2).shape)
    assert quadrature_oracle(spec, 0.0, level=2, amplitude=ones).value == pytest.approx(4.0, abs=1e-13)


@pytest.mark.parametrize("name", sorted(matrix_specs()))
def test_time_zero_is_positive_mass(name):
    spec = matrix_specs()[name]
    v = oscillatory_integral(spec, 0.0).value
    assert v.real > 0 and abs(v.imag) < 1e-15
    assert abs(v - quadrature_oracle(spec, 0.0).value) <= 1e-9


@pytest.mark.parametrize("name", sorted(matrix_specs()))
def test_off_axis_agreement_with_oracle(name):
    spec = matrix_specs()[name]
    dy = oscillatory_integral(spec, 256.0, (0.3, -0.2)).value
    orc = quadrature_oracle(spec, 256.0, (0.3, -0.2)).value
    assert abs(dy - orc) <= max(1e-9, 1e-3 * abs(orc))


def test_oracle_self_convergence(par_spec):
    a = quadrature_oracle(par_spec, 1024.0, level=5).value
    b = quadrature_oracle(par_spec, 1024.0, level=6).value
    assert abs(a - b) <= 1e-3 * abs(b)


@given(st.floats(1, 300), st.floats(-1, 1), st.floats(-1, 1))
def test_conjugation_symmetry(t, s1, s2):
    spec = matrix_specs()["paraboloid"]
    a = oscillatory_integral(spec, t, (s1, s2), tol=1e-12).value
    b = oscillatory_integral(spec, -t, (s1, s2), tol=1e-12).value
    assert abs(b - a.conjugate()) <= 1e-10 * max(abs(a), 1e-3)


def test_bad_tolerance(par_spec):
    with pytest.raises(DomainError):
        oscillatory_integral(par_spec, 1.0, tol=0.0)


def test_dyadic_rescaling_identity():
    spec = cubic_damped_spec(alpha=0.1, radius=0.3)
    support = spec.cutoff.support_box(spec.weights)
    k0, k1, _ = dyadic_range(spec, support)
    for k in range(k0, k1 + 1):
        for t, s in [(64.0, (0.0, 0.0)), (512.0, (0.3, -0.2))]:
            direct = dyadic_piece(spec, t, s, k, rescaled=False, tol=1e-14)
            scaled = dyadic_piece(spec, t, s, k, rescaled=True, tol=1e-14)
            assert abs(direct - scaled) <= 1e-6 * max(abs(direct), 1e-12)


# -- surface-measure Fourier transform -----------------------------------


def test_fourier_at_zero_is_surface_mass(par_spec, paraboloid):
    v = fourier_surface_measure(par_spec, (0, 0, 0))
    area = lambda x1, x2: np.sqrt(1 + 4 * x1**2 + 4 * x2**2)
    ref = quadrature_oracle(par_spec, 0.0, amplitude=lambda x1, x2: par_spec.cutoff(x1, x2, par_spec.weights) * area(x1, x2))
    assert v.real > 0 and abs(v - ref.value) <= 1e-10


@given(st.floats(-30, 30), st.floats(-30, 30), st.floats(-200, 200), st.floats(-3, 3))
def test_fourier_modulus_ignores_offset(x1, x2, x3, c):
    spec = matrix_specs()["paraboloid"]
    a = fourier_surface_measure(spec, (x1, x2, x3))
    b = fourier_surface_measure(spec.with_offset(c), (x1, x2, x3))
    assert abs(abs(a) - abs(b)) <= 1e-10


def test_fourier_radial_decay(par_spec):
    lam = 1024.0
    # at xi = (0, 0, lam) the area factor is 1 at the stationary point
    assert abs(fourier_surface_measure(par_spec, (0, 0, lam))) * lam / math.pi == pytest.approx(1, rel=0.1)


def test_gradient_at_zero(par_spec):
    g = fourier_surface_measure_gradient(par_spec, (0, 0, 0))
    cut = lambda x1, x2: par_spec.cutoff(x1, x2, par_spec.weights) * np.sqrt(1 + 4 * x1**2 + 4 * x2**2)
    third = quadrature_oracle(par_spec, 0.0, amplitude=lambda x1, x2: cut(x1, x2) * (x1**2 + x2**2)).value
    # even amplitude and even phase: the horizontal components vanish
    assert abs(g[0]) < 1e-14 and abs(g[1]) < 1e-14
    assert abs(g[2] - (-1j) * third) <= 1e-10


@pytest.mark.parametrize("xi", [(3.0, -2.0, 40.0), (-10.0, 5.0, -60.0)])
def test_gradient_matches_differences(xi):
    spec = matrix_specs()["cubic_damped"].with_offset(0.5)
    g = fourier_surface_measure_gradient(spec, xi, tol=1e-12)
    h = 1e-4
    for j in range(3):
        up = list(xi)
        dn = list(xi)
        up[j] += h
        dn[j] -= h
        fd = (fourier_surface_measure(spec, up, tol=1e-13) - fourier_surface_measure(spec, dn, tol=1e-13)) / (2 * h)
        assert abs(fd - g[j]) <= 1e-2 * max(abs(g[j]), 1e-8)


# -- non-stationary probe ------------------------------------------------


def test_probe_preconditions(paraboloid):
    spec = SurfaceSpec(paraboloid, CutoffSpec("radial_bump", (1.0, 0.0), 0.1))
    with pytest.raises(DomainError):
        nonstationary_decay_probe(spec, (1, 0), (-2.0, 0.0), [16.0])
    wide = SurfaceSpec(paraboloid, CutoffSpec("radial_bump", (1.0, 0.0), 0.9))
    with pytest.raises(DomainError):
        nonstationary_decay_probe(wide, (1, 0), (0.0, 0.0), [16.0])


def test_probe_at_zero_is_mass(paraboloid):
    spec = SurfaceSpec(paraboloid, CutoffSpec("radial_bump", (1.0, 0.0), 0.1))
    (p,) = nonstationary_decay_probe(spec, (1, 0), (0.0, 0.0), [0.0])
    assert p.modulus == pytest.approx(abs(oscillatory_integral(spec, 0.0).value), rel=1e-12)


def test_batch_rows(par_spec):
    rows = run_batch(['{"spec": "p", "t": 16, "s": [0, 0]}', "", '{"spec": "p", "xi": [0, 0, -16]}'], {"p": par_spec})
    assert len(rows) == 2
    assert rows[0][5] == pytest.approx(abs(PARABOLOID_R05[16.0]), rel=1e-9)
