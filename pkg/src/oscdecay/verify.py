"""Seeded property checks of the homogeneous-function identities and helpers.

Every check draws from ``numpy.random.default_rng(seed)`` in a fixed order
so that a given seed always produces the same report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import homfn
from .cutoffs import partition_sum
from .errors import DomainError
from .homfn import MixedHomPoly, Weights

MAX_TOTAL_DEGREE = 8


def _rational(rng, lo=-5, hi=5, den=6) -> Fraction:
    num = 0
    while num == 0:
        num = int(rng.integers(lo * den, hi * den + 1))
    return Fraction(num, int(rng.integers(1, den + 1)))


def random_phase(rng: np.random.Generator, max_degree: int = MAX_TOTAL_DEGREE) -> MixedHomPoly:
    """Random degree-one kappa-homogeneous polynomial with rational weights.

    Two lattice points (a, b) with a + b <= max_degree fix the weights
    through a k1 + b k2 = 1; every lattice point on that line may then carry
    a random rational coefficient.  Conic weights are redrawn.
    """
    pts = [(a, b) for a in range(max_degree + 1) for b in range(max_degree + 1 - a) if a + b >= 1]
    while True:
        i, j = rng.choice(len(pts), size=2, replace=False)
        (a1, b1), (a2, b2) = pts[i], pts[j]
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        k1 = Fraction(b2 - b1, det)
        k2 = Fraction(a1 - a2, det)
        if k1 <= 0 or k2 <= 0 or (k1 == 1 and k2 == 1):
            continue
        kappa = Weights(k1, k2)
        line = [(a, b) for a, b in pts if a * k1 + b * k2 == 1]
        mons = [(a, b, _rational(rng)) for a, b in line if (a, b) in (pts[i], pts[j]) or rng.random() < 0.5]
        return MixedHomPoly(mons, kappa, 1)


def random_point(rng: np.random.Generator, lo=-3, hi=3) -> tuple[Fraction, Fraction]:
    return (_rational(rng, lo, hi, 8), _rational(rng, lo, hi, 8))


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    total: int = 0
    worst: float = 0.0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, value: float = 0.0, detail=None):
        self.total += 1
        self.passed += bool(ok)
        self.worst = max(self.worst, float(value))
        if not ok and len(self.failures) < 5:
            self.failures.append(detail)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "total": self.total, "worst": self.worst,
                "ok": self.ok, "failures": self.failures}


def check_identities(seed: int, polys: int = 100, points: int = 100, float_tol: float = 1e-9) -> list[CheckResult]:
    """Euler and second-derivative identities, exactly and in floating point."""
    rng = np.random.default_rng([seed, 1])
    euler = CheckResult("euler_exact")
    second = CheckResult("second_derivative_exact")
    floats = CheckResult("identities_float")
    for _ in range(polys):
        f = random_phase(rng)
        ff = MixedHomPoly({k: float(v) for k, v in f.terms.items()}, f.weights, 1)
        for _ in range(points):
            x = random_point(rng)
            e = homfn.euler_residual(f, x)
            s = homfn.second_derivative_identity_residual(f, x)
            euler.record(e == 0, abs(float(e)), str(f))
            second.record(s == (0, 0), max(abs(float(v)) for v in s), str(f))
            xf = (float(x[0]), float(x[1]))
            scale = 1 + sum(abs(float(c)) * (abs(xf[0]) + 1) ** a * (abs(xf[1]) + 1) ** b for a, b, c in f.monomials())
            res = max(abs(homfn.euler_residual(ff, xf)), *map(abs, homfn.second_derivative_identity_residual(ff, xf)))
            floats.record(res / scale <= float_tol, res / scale, str(f))
    return [euler, second, floats]


def check_factorizations(seed: int, phases: int = 20, samples: int = 200, tol: float = 1e-8) -> CheckResult:
    """Reconstruction of f from its local factorization at critical directions or real ray roots."""
    rng = np.random.default_rng([seed, 2])
    out = CheckResult("factorization")
    done = 0
    while done < phases:
        f = random_phase(rng)
        if f.weights.k1 == 1 or f.weights.k2 == 1:
            continue
        done += 1
        roots = [r for r, _ in homfn.polyuni.real_roots(f.restrict_x1(1))] if len(f.restrict_x1(1)) > 1 else []
        ys = roots + [random_point(rng)[1]]
        for y in ys:
            fac = homfn.factor_at_direction(f, (Fraction(1), y))
            k1, k2 = f.weights.as_floats()
            # points in a narrow sector around the ray through (1, y)
            rad = np.exp(rng.uniform(-1, 1, samples))
            yy = float(y) + rng.uniform(-0.3, 0.3, samples)
            x1 = rad**k1
            x2 = yy * rad**k2
            res = homfn.factorization_residual(f, fac, x1, x2)
            out.record(res <= tol, res, str(f))
    return out


def check_disjunction(seed: int, phases: int = 20, points: int = 1000) -> CheckResult:
    """Hess f != 0 or d_jj f != 0 wherever k_j != 1 and d_j f != 0."""
    rng = np.random.default_rng([seed, 3])
    out = CheckResult("nondegeneracy_disjunction")
    for _ in range(phases):
        f = random_phase(rng)
        for _ in range(points):
            x = random_point(rng)
            for j in (0, 1):
                verdict = homfn.nondegeneracy_disjunction(f, x, j)
                if verdict is not None:
                    out.record(bool(verdict), 0.0, (str(f), [str(v) for v in x], j))
    return out


def curve_test_functions(rng: np.random.Generator, count: int = 10) -> list[tuple[homfn.Poly2, tuple[float, float]]]:
    """Polynomials g with d2 g(x0) = 0 != d22 g(x0) at a random point x0.

    Exponents stay below 3 and coefficients below 1/2 so that the central
    difference truncation error at step 1e-3 sits well under 1e-6.
    """
    out = []
    while len(out) < count:
        terms = {(int(a), int(b)): float(rng.uniform(-0.5, 0.5)) for a, b in rng.integers(0, 3, size=(5, 2))}
        terms[(0, 2)] = terms.get((0, 2), 0.0) + float(rng.choice([-1, 1])) * rng.uniform(1, 2)
        h = homfn.Poly2(terms)
        x0 = (float(rng.uniform(-1, 1)), float(rng.uniform(-1, 1)))
        slope = float(h.partial(1)(*x0))
        g = h - homfn.Poly2({(0, 1): slope})
        if abs(float(g.partial(1).partial(1)(*x0))) > 0.5:
            out.append((g, x0))
    return out


def check_curves(seed: int, count: int = 10, step: float = 1e-3, tol: float = 1e-6) -> CheckResult:
    rng = np.random.default_rng([seed, 4])
    out = CheckResult("hessian_curve")
    for g, x0 in curve_test_functions(rng, count):
        r = homfn.hessian_curve_check(g, x0, step)
        out.record(r <= tol, r, (str(g), list(x0)))
    return out


def check_partition(seed: int, points: int = 2000, tol: float = 1e-10) -> CheckResult:
    """sum_k psi(delta_{2^k} x) = 1 away from the origin."""
    rng = np.random.default_rng([seed, 5])
    out = CheckResult("partition_of_unity")
    for _ in range(5):
        f = random_phase(rng)
        r = np.exp(rng.uniform(-6, 6, points))
        ang = rng.uniform(0, 2 * np.pi, points)
        k1, k2 = f.weights.as_floats()
        x1 = r**k1 * np.cos(ang)
        x2 = r**k2 * np.sin(ang)
        total = partition_sum(x1, x2, f.weights, range(-40, 41))
        err = float(np.max(np.abs(total - 1)))
        out.record(err <= tol, err, str(f.weights.to_json()))
    return out


def check_polar(seed: int, points: int = 200, tol: float = 1e-10) -> CheckResult:
    """x = delta_r(theta) with |theta| = 1 for the computed polar pair."""
    rng = np.random.default_rng([seed, 6])
    out = CheckResult("polar_round_trip")
    for _ in range(5):
        kappa = random_phase(rng).weights
        for _ in range(points // 5):
            x = tuple(float(v) for v in rng.normal(size=2) * np.exp(rng.uniform(-3, 3)))
            r, theta = homfn.polar_decompose(x, kappa)
            back = homfn.dilate(theta, r, kappa)
            err = max(abs(back[0] - x[0]), abs(back[1] - x[1])) / max(abs(x[0]), abs(x[1]))
            err = max(err, abs(np.hypot(*theta) - 1))
            out.record(err <= tol, err, (kappa.to_json(), list(x)))
    return out


def run_suite(seed: int, *, polys: int = 100, points: int = 100, phases: int = 20,
              disjunction_points: int = 1000, curves: int = 10) -> dict:
    """All property checks; the result depends on the seed only."""
    if polys < 1 or points < 1:
        raise DomainError("the suite needs at least one polynomial and one point")
    checks = check_identities(seed, polys, points)
    checks.append(check_factorizations(seed, phases))
    checks.append(check_disjunction(seed, phases, disjunction_points))
    checks.append(check_curves(seed, curves))
    checks.append(check_partition(seed))
    checks.append(check_polar(seed))
    return {
        "seed": seed,
        "checks": [c.to_json() for c in checks],
        "all_passed": all(c.ok for c in checks),
    }
