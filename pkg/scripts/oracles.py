"""Independent 1-D reference values for the quadrature tests.

Radially symmetric and separable cases reduce J(t, 0) to one-dimensional
oscillatory integrals, evaluated here with QUADPACK's Fourier-weighted rules.
Run once; the printed numbers are frozen in tests/test_oscquad.py.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad


def bump(u):
    return np.exp(1 - 1 / (1 - u * u)) if abs(u) < 1 else 0.0


def fourier_1d(g, a, b, w):
    """int_a^b g(u) e^{i w u} du."""
    if w == 0:
        return quad(g, a, b, epsabs=1e-15, epsrel=1e-13, limit=400)[0] + 0j
    re = quad(g, a, b, weight="cos", wvar=w, epsabs=1e-15, epsrel=1e-13, limit=2000)[0]
    im = quad(g, a, b, weight="sin", wvar=w, epsabs=1e-15, epsrel=1e-13, limit=2000)[0]
    return complex(re, im)


@dataclass(frozen=True)
class ParaboloidCase:
    """x1^2 + x2^2 with a radial bump of radius R at the origin."""

    radius: float = 0.5

    def value(self, t: float) -> complex:
        # polar coordinates and u = r^2: pi int_0^{R^2} bump(sqrt(u)/R) e^{itu} du
        R = self.radius
        return np.pi * fourier_1d(lambda u: bump(np.sqrt(u) / R), 0.0, R * R, t)


@dataclass(frozen=True)
class SexticProductCase:
    """x1^6 + x2^6 with a product bump of radius R: J = I(t)^2."""

    radius: float = 0.8

    def one_dim(self, t: float) -> complex:
        # I(t) = 2 int_0^R bump(x/R) e^{i t x^6} dx, the integrand being even
        R = self.radius
        opts = dict(epsabs=1e-15, epsrel=1e-13, limit=4000)
        re = quad(lambda x: bump(x / R) * np.cos(t * x**6), 0, R, **opts)[0]
        im = quad(lambda x: bump(x / R) * np.sin(t * x**6), 0, R, **opts)[0]
        return 2 * complex(re, im)

    def value(self, t: float) -> complex:
        return self.one_dim(t) ** 2


if __name__ == "__main__":
    par = ParaboloidCase()
    for t in (0.0, 16.0, 1024.0):
        v = par.value(t)
        print(f"paraboloid R={par.radius} t={t:g}: {v.real:.15e} {v.imag:+.15e}  |J| t/pi = {abs(v) * t / np.pi:.6f}")
    sex = SexticProductCase()
    for t in (0.0, 64.0, 1024.0):
        v = sex.value(t)
        print(f"sextic R={sex.radius} t={t:g}: {v.real:.15e} {v.imag:+.15e}")
