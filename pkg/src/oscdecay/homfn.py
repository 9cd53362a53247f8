"""Calculus of kappa-homogeneous polynomials in two variables.

A function f on R^2 \\ {0} is kappa-homogeneous of degree d when
f(r^k1 x1, r^k2 x2) = r^d f(x1, x2) for all r > 0.  For a polynomial this
means every monomial x1^a x2^b satisfies k1*a + k2*b = d, so with rational
weights homogeneity, orders of vanishing and the height are all exactly
computable.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import polyuni
from .errors import (
    DegenerateInputError,
    DomainError,
    HeterogeneityError,
    NumericError,
    UnsupportedCaseError,
)

log = logging.getLogger(__name__)

EXACT_TYPES = (int, Fraction)


def as_number(value):
    """Parse a coefficient: strings and ints become Fractions, floats stay floats."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, EXACT_TYPES):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        return float(value)
    raise TypeError(f"cannot interpret {value!r} as a coefficient")


def _fmt(c) -> str:
    return str(c) if isinstance(c, Fraction) else repr(float(c))


@dataclass(frozen=True)
class Weights:
    """Dilation weights kappa = (k1, k2), stored as exact rationals."""

    k1: Fraction
    k2: Fraction

    def __post_init__(self):
        k1, k2 = Fraction(str(self.k1)), Fraction(str(self.k2))
        if k1 <= 0 or k2 <= 0:
            raise DomainError(f"weights must be positive, got ({k1}, {k2})")
        object.__setattr__(self, "k1", k1)
        object.__setattr__(self, "k2", k2)

    @property
    def is_conic(self) -> bool:
        return self.k1 == 1 and self.k2 == 1

    @property
    def total(self) -> Fraction:
        return self.k1 + self.k2

    def as_floats(self) -> tuple[float, float]:
        return float(self.k1), float(self.k2)

    def swapped(self) -> "Weights":
        return Weights(self.k2, self.k1)

    def __getitem__(self, j: int) -> Fraction:
        return (self.k1, self.k2)[j]

    def to_json(self) -> list[str]:
        return [str(self.k1), str(self.k2)]


def require_not_conic(kappa: Weights) -> None:
    if kappa.is_conic:
        raise UnsupportedCaseError(
            "conic weights kappa = (1, 1) are excluded: the theory requires kappa != (1, 1)"
        )


class Poly2:
    """Bivariate polynomial sum c_ab x1^a x2^b with exact or float coefficients."""

    def __init__(self, terms: Mapping[tuple[int, int], object] | Iterable = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = (((int(a), int(b)), c) for a, b, c in terms)
        acc: dict[tuple[int, int], object] = {}
        for (a, b), c in items:
            if a < 0 or b < 0:
                raise DomainError(f"negative exponent in monomial ({a}, {b})")
            c = as_number(c)
            acc[(a, b)] = acc.get((a, b), 0) + c
        self.terms = {k: v for k, v in sorted(acc.items()) if v != 0}

    # -- basic structure -------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, EXACT_TYPES) for c in self.terms.values())

    @property
    def total_degree(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def monomials(self) -> list[tuple[int, int, object]]:
        return [(a, b, c) for (a, b), c in self.terms.items()]

    def _new(self, terms) -> "Poly2":
        return Poly2(terms)

    def __eq__(self, other):
        return isinstance(other, Poly2) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in self.terms.items():
            mono = "*".join(s for s in (f"x1^{a}" if a else "", f"x2^{b}" if b else "") if s)
            parts.append(f"{_fmt(c)}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # -- arithmetic ------------------------------------------------------
    def partial(self, j: int) -> "Poly2":
        out = {}
        for (a, b), c in self.terms.items():
            e = (a, b)[j]
            if e:
                key = (a - 1, b) if j == 0 else (a, b - 1)
                out[key] = c * e
        return self._derived(out, j)

    def _derived(self, terms, j):
        return Poly2(terms)

    def __mul__(self, other: "Poly2") -> "Poly2":
        out: dict = {}
        for (a, b), c in self.terms.items():
            for (p, q), d in other.terms.items():
                out[(a + p, b + q)] = out.get((a + p, b + q), 0) + c * d
        return Poly2(out)

    def __sub__(self, other: "Poly2") -> "Poly2":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) - c
        return Poly2(out)

    def __add__(self, other: "Poly2") -> "Poly2":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Poly2(out)

    def scaled(self, s) -> "Poly2":
        return Poly2({k: c * s for k, c in self.terms.items()})

    def swapped(self) -> "Poly2":
        return Poly2({(b, a): c for (a, b), c in self.terms.items()})

    # -- evaluation ------------------------------------------------------
    def __call__(self, x1, x2):
        """Float evaluation, vectorized over numpy arrays."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        out = np.zeros(np.broadcast(x1, x2).shape)
        p1 = _powers(x1, max((a for a, _ in self.terms), default=0))
        p2 = _powers(x2, max((b for _, b in self.terms), default=0))
        for (a, b), c in self.terms.items():
            out = out + float(c) * p1[a] * p2[b]
        return out

    def exact(self, x1, x2):
        """Exact evaluation at rational points (falls back to float for float data)."""
        acc = Fraction(0)
        for (a, b), c in self.terms.items():
            acc += c * Fraction(x1) ** a * Fraction(x2) ** b if isinstance(c, EXACT_TYPES) else float(c) * float(x1) ** a * float(x2) ** b
        return acc

    def value(self, x):
        """Exact at int/Fraction points of an exact polynomial, float otherwise."""
        if self.is_exact and all(isinstance(v, EXACT_TYPES) for v in x):
            return self.exact(*x)
        return float(self(float(x[0]), float(x[1])))

    def restrict_x1(self, x1) -> list:
        """Univariate coefficients of y -> p(x1, y), lowest degree first."""
        deg = max((b for _, b in self.terms), default=-1)
        out = [Fraction(0) if self.is_exact else 0.0] * (deg + 1)
        for (a, b), c in self.terms.items():
            out[b] += c * (Fraction(x1) ** a if self.is_exact else float(x1) ** a)
        return polyuni.normalize(out) if self.is_exact else _trim_float(out)

    def taylor_coefficients(self, x) -> dict[tuple[int, int], object]:
        """Coefficients of h^(i,j) in p(x + h); exact when x and p are exact."""
        exact = self.is_exact and all(isinstance(v, EXACT_TYPES) for v in x)
        x1, x2 = (Fraction(x[0]), Fraction(x[1])) if exact else (float(x[0]), float(x[1]))
        out: dict = {}
        for (a, b), c in self.terms.items():
            cc = c if exact else float(c)
            for i in range(a + 1):
                for j in range(b + 1):
                    v = cc * math.comb(a, i) * math.comb(b, j) * x1 ** (a - i) * x2 ** (b - j)
                    out[(i, j)] = out.get((i, j), 0) + v
        return out

    def _taylor_scales(self, x) -> dict[tuple[int, int], float]:
        x1, x2 = abs(float(x[0])), abs(float(x[1]))
        out: dict = {}
        for (a, b), c in self.terms.items():
            for i in range(a + 1):
                for j in range(b + 1):
                    v = abs(float(c)) * math.comb(a, i) * math.comb(b, j) * x1 ** (a - i) * x2 ** (b - j)
                    out[(i, j)] = out.get((i, j), 0.0) + v
        return out


def _powers(x: np.ndarray, top: int) -> list:
    """[x^0, ..., x^top] by repeated multiplication (much cheaper than pow)."""
    out = [np.ones_like(x)]
    for _ in range(top):
        out.append(out[-1] * x)
    return out


def _trim_float(coeffs: list) -> list:
    coeffs = [float(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    return coeffs


def monomial_degree(a: int, b: int, kappa: Weights) -> Fraction:
    return kappa.k1 * a + kappa.k2 * b


def check_homogeneity(monomials, kappa: Weights, *, samples: int = 20, seed: int = 0) -> Fraction:
    """Common weighted degree k1*a + k2*b of a list of (a, b, coeff) monomials.

    Raises HeterogeneityError naming the first pair of monomials whose degrees
    differ.  The returned degree is also checked numerically: f(delta_r x) =
    r^d f(x) at ``samples`` random (x, r) pairs to relative 1e-10.
    """
    mons = [(int(a), int(b), c) for a, b, c in monomials]
    mons = [m for m in mons if as_number(m[2]) != 0]
    if not mons:
        raise DegenerateInputError("monomial list is empty (zero polynomial)")
    a0, b0, _ = mons[0]
    deg = monomial_degree(a0, b0, kappa)
    for a, b, _ in mons[1:]:
        d = monomial_degree(a, b, kappa)
        if d != deg:
            raise HeterogeneityError((a0, b0), (a, b), deg, d)
    poly = Poly2(mons)
    rng = np.random.default_rng(seed)
    k1, k2 = kappa.as_floats()
    for _ in range(samples):
        x1, x2 = rng.uniform(-2.0, 2.0, size=2)
        r = float(np.exp(rng.uniform(-2.0, 2.0)))
        lhs = float(poly(r**k1 * x1, r**k2 * x2))
        rhs = r ** float(deg) * float(poly(x1, x2))
        scale = r ** float(deg) * sum(abs(float(c)) * abs(x1) ** a * abs(x2) ** b for a, b, c in mons)
        if abs(lhs - rhs) > 1e-10 * max(scale, 1e-300):
            raise NumericError(f"numeric homogeneity check failed at x=({x1}, {x2}), r={r}")
    return deg


class MixedHomPoly(Poly2):
    """kappa-homogeneous polynomial: every monomial has weighted degree ``degree``."""

    def __init__(self, monomials, weights: Weights, degree=None):
        super().__init__(monomials)
        self.weights = weights
        if degree is None:
            if self.is_zero:
                raise DegenerateInputError("cannot infer the degree of the zero polynomial")
            degree = check_homogeneity(self.monomials(), weights)
        degree = Fraction(str(degree)) if not isinstance(degree, Fraction) else degree
        for a, b, _ in self.monomials():
            d = monomial_degree(a, b, weights)
            if d != degree:
                raise HeterogeneityError((a, b), (a, b), d, degree)
        self.degree = degree

    def _derived(self, terms, j):
        return MixedHomPoly(terms, self.weights, self.degree - self.weights[j])

    def __mul__(self, other):
        prod = Poly2.__mul__(self, other)
        if isinstance(other, MixedHomPoly) and other.weights == self.weights:
            return MixedHomPoly(prod.terms, self.weights, self.degree + other.degree)
        return prod

    def _same_kind(self, other, out):
        if isinstance(other, MixedHomPoly) and other.weights == self.weights and other.degree == self.degree:
            return MixedHomPoly(out.terms, self.weights, self.degree)
        return out

    def __sub__(self, other):
        return self._same_kind(other, Poly2.__sub__(self, other))

    def __add__(self, other):
        return self._same_kind(other, Poly2.__add__(self, other))

    def scaled(self, s):
        return MixedHomPoly(Poly2.scaled(self, s).terms, self.weights, self.degree)

    def swapped(self) -> "MixedHomPoly":
        return MixedHomPoly(Poly2.swapped(self).terms, self.weights.swapped(), self.degree)

    def reflected(self, axis: int) -> "MixedHomPoly":
        """Polynomial x -> f(x) with coordinate ``axis`` negated."""
        out = {}
        for (a, b), c in self.terms.items():
            e = (a, b)[axis]
            out[(a, b)] = -c if e % 2 else c
        return MixedHomPoly(out, self.weights, self.degree)

    def __eq__(self, other):
        return Poly2.__eq__(self, other) and getattr(other, "weights", None) == self.weights

    __hash__ = Poly2.__hash__

    def to_json(self) -> dict:
        return {
            "weights": self.weights.to_json(),
            "monomials": [[a, b, _fmt(c)] for a, b, c in self.monomials()],
            "degree": str(self.degree),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "MixedHomPoly":
        weights = Weights(*[Fraction(str(w)) for w in obj["weights"]])
        mons = [(int(a), int(b), as_number(c)) for a, b, c in obj["monomials"]]
        degree = obj.get("degree")
        deg = check_homogeneity(mons, weights)
        if degree is not None and Fraction(str(degree)) != deg:
            raise HeterogeneityError((mons[0][0], mons[0][1]), (mons[0][0], mons[0][1]), deg, Fraction(str(degree)))
        return cls(mons, weights, deg)


# ---------------------------------------------------------------------------
# dilations and polar coordinates


def dilate(x, r, kappa: Weights):
    """delta_r(x) = (r^k1 x1, r^k2 x2)."""
    if not r > 0:
        raise DomainError(f"dilation parameter must be positive, got {r}")
    k1, k2 = kappa.as_floats()
    return (r**k1 * x[0], r**k2 * x[1])


class Polar(NamedTuple):
    r: float
    theta: tuple[float, float]


def polar_decompose(x, kappa: Weights, iterations: int = 80) -> Polar:
    """Write x = delta_r(theta) with |theta| = 1.

    r is the root of rho -> |delta_{1/rho} x| - 1, found by bisection in
    log(rho) on the bracket [min_k |x|^(1/k), max_k |x|^(1/k)].
    """
    x1, x2 = float(x[0]), float(x[1])
    norm = math.hypot(x1, x2)
    if norm == 0.0:
        raise DomainError("polar decomposition is undefined at the origin")
    k1, k2 = kappa.as_floats()
    ends = [math.log(norm) / k for k in (k1, k2)]
    lo, hi = min(ends), max(ends)

    def excess(u):
        return math.hypot(math.exp(-k1 * u) * x1, math.exp(-k2 * u) * x2) - 1.0

    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo < -1e-12 or f_hi > 1e-12:
        raise NumericError(f"polar radius not bracketed: excess({lo})={f_lo}, excess({hi})={f_hi}")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    r = math.exp(u)
    theta = (math.exp(-k1 * u) * x1, math.exp(-k2 * u) * x2)
    n = math.hypot(*theta)
    return Polar(r, (theta[0] / n, theta[1] / n))


def polar_radius(x1, x2, kappa: Weights):
    """Vectorized homogeneous radius r(x), with r(0) = 0.

    Newton's method on the convex decreasing function
    u -> log(sum_j x_j^2 exp(-2 k_j u)) started left of the root, where it
    converges monotonically.  The start is the larger per-axis estimate
    log|x_j| / k_j, at which the sum lies in [1, 2].
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    shape = np.broadcast(x1, x2).shape
    x1 = np.broadcast_to(x1, shape).ravel()
    x2 = np.broadcast_to(x2, shape).ravel()
    k1, k2 = kappa.as_floats()
    out = np.zeros(x1.shape)
    nz = (x1 != 0) | (x2 != 0)
    if not nz.any():
        return out.reshape(shape)
    a1 = x1[nz] ** 2
    a2 = x2[nz] ** 2
    ratio = kappa.k2 / kappa.k1
    if ratio in (1, 2, Fraction(1, 2)):
        # closed forms: with w = rho^(-2 k_min) the defining equation is linear or quadratic in w
        if ratio == 1:
            w = 1.0 / (a1 + a2)
            out[nz] = w ** (-0.5 / k1)
        else:
            lin, quad, k = (a1, a2, k1) if ratio == 2 else (a2, a1, k2)
            w = 2.0 / (lin + np.sqrt(lin * lin + 4.0 * quad))
            out[nz] = w ** (-0.5 / k)
        return out.reshape(shape)
    with np.errstate(divide="ignore"):
        u = np.maximum(
            np.where(a1 > 0, 0.5 * np.log(a1) / k1, -np.inf),
            np.where(a2 > 0, 0.5 * np.log(a2) / k2, -np.inf),
        )
    for _ in range(100):
        e1 = a1 * np.exp(-2 * k1 * u)
        e2 = a2 * np.exp(-2 * k2 * u)
        s = e1 + e2
        g = np.log(s)
        dg = -2 * (k1 * e1 + k2 * e2) / s
        step = g / dg
        u = u - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(u))):
            break
    out[nz] = np.exp(u)
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# jets and identities


def evaluate_jet(f: Poly2, x, order: int = 2) -> list:
    """Partial derivatives of f at x up to ``order``.

    Entry k of the result is a k-dimensional nested list holding
    d^k f / dx_{j1} ... dx_{jk}; entry 0 is the value, entry 1 the gradient,
    entry 2 the Hessian matrix.
    """
    if not 0 <= order <= 4:
        raise DomainError("jet order must lie in 0..4")
    cache: dict[tuple[int, ...], Poly2] = {(): f}

    def deriv(idx):
        if idx not in cache:
            cache[idx] = deriv(idx[:-1]).partial(idx[-1])
        return cache[idx]

    def build(k, prefix):
        if k == 0:
            return deriv(tuple(sorted(prefix))).value(x)
        return [build(k - 1, prefix + (j,)) for j in range(2)]

    return [build(k, ()) for k in range(order + 1)]


def euler_residual(f: MixedHomPoly, x):
    """grad f(x) . (k1 x1, k2 x2) - degree * f(x); exactly zero in rational mode."""
    k1, k2 = f.weights.k1, f.weights.k2
    exact = f.is_exact and all(isinstance(v, EXACT_TYPES) for v in x)
    if not exact:
        k1, k2 = float(k1), float(k2)
    g1 = f.partial(0).value(x)
    g2 = f.partial(1).value(x)
    deg = f.degree if exact else float(f.degree)
    return g1 * k1 * x[0] + g2 * k2 * x[1] - deg * f.value(x)


def second_derivative_identity_residual(f: MixedHomPoly, x):
    """D^2 f(x) (k1 x1, k2 x2) - ((1-k1) d1 f, (1-k2) d2 f) for degree-one f."""
    if f.degree != 1:
        raise DomainError(f"identity requires degree 1, got {f.degree}")
    k1, k2 = f.weights.k1, f.weights.k2
    exact = f.is_exact and all(isinstance(v, EXACT_TYPES) for v in x)
    if not exact:
        k1, k2 = float(k1), float(k2)
    d1, d2 = f.partial(0), f.partial(1)
    h11 = d1.partial(0).value(x)
    h12 = d1.partial(1).value(x)
    h22 = d2.partial(1).value(x)
    v = (k1 * x[0], k2 * x[1])
    return (
        h11 * v[0] + h12 * v[1] - (1 - k1) * d1.value(x),
        h12 * v[0] + h22 * v[1] - (1 - k2) * d2.value(x),
    )


def hessian_polynomial(f: Poly2) -> Poly2:
    """Hess f = d11 f * d22 f - (d12 f)^2 as an exact polynomial."""
    d1, d2 = f.partial(0), f.partial(1)
    h11, h12, h22 = d1.partial(0), d1.partial(1), d2.partial(1)
    return h11 * h22 - h12 * h12


def nondegeneracy_disjunction(f: MixedHomPoly, x, j: int):
    """Whether Hess f(x) != 0 or d_jj f(x) != 0.

    Returns None when the hypothesis (k_j != 1 and d_j f(x) != 0) fails.
    """
    if f.weights[j] == 1 or f.partial(j).value(x) == 0:
        return None
    hess = hessian_polynomial(f).value(x)
    return hess != 0 or f.partial(j).partial(j).value(x) != 0


# ---------------------------------------------------------------------------
# orders of vanishing


ORDER_INFINITE = math.inf


def order_at(f: Poly2, x, rtol: float = 1e-10):
    """Smallest j with D^j f(x) != 0 (inf for the zero polynomial).

    Exact for rational data; for float points a Taylor coefficient counts as
    zero when it is below ``rtol`` times the magnitude of its terms.
    """
    if f.is_zero:
        return ORDER_INFINITE
    coeffs = f.taylor_coefficients(x)
    exact = f.is_exact and all(isinstance(v, EXACT_TYPES) for v in x)
    scales = None if exact else f._taylor_scales(x)
    by_order: dict[int, list] = {}
    for (i, j), c in coeffs.items():
        by_order.setdefault(i + j, []).append(((i, j), c))
    for k in sorted(by_order):
        for key, c in by_order[k]:
            if exact:
                if c != 0:
                    return k
            elif abs(c) > rtol * max(scales[key], 1e-300):
                return k
    return ORDER_INFINITE


def _float_multiplicity(coeffs: Sequence[float], root: float, rtol: float = 1e-8) -> int:
    """Multiplicity of a float root by successive derivative tests."""
    p = np.polynomial.Polynomial([float(c) for c in coeffs])
    m = 0
    while p.degree() >= 0 and m <= len(coeffs):
        val = p(root)
        mag = np.polynomial.Polynomial(np.abs(p.coef))(abs(root))
        if abs(val) > rtol * max(mag, 1e-300):
            return m
        p = p.deriv()
        m += 1
        if not p.coef.any():
            break
    return m


def _ray_multiplicity(f: Poly2, sign: int, y) -> int:
    p = f.restrict_x1(sign)
    if f.is_exact and isinstance(y, EXACT_TYPES):
        return polyuni.root_multiplicity(p, y)
    if f.is_exact:
        return polyuni.root_multiplicity(p, float(y))
    return _float_multiplicity(p, float(y))


def global_order(f: MixedHomPoly, kappa: Weights | None = None) -> int:
    """ord f = max of order_at over the unit circle, computed exactly.

    Points with theta1 != 0 lie on the dilation orbit of some (+-1, y); there
    the order is the multiplicity of y as a root of y -> f(+-1, y).  The two
    axis points (0, +-1) are handled by Taylor recentering.
    """
    kappa = kappa or f.weights
    if f.is_zero:
        raise DegenerateInputError("ord of the zero polynomial is undefined")
    best = 0
    for sign in (1, -1):
        p = f.restrict_x1(sign)
        if f.is_exact:
            for _, mult in polyuni.real_roots(p):
                best = max(best, mult)
        else:
            for z in np.roots(list(reversed(p))) if len(p) > 1 else []:
                if abs(z.imag) < 1e-9:
                    best = max(best, _float_multiplicity(p, float(z.real)))
    for s in (1, -1):
        best = max(best, order_at(f, (Fraction(0), Fraction(s))) if f.is_exact else order_at(f, (0.0, float(s))))
    return int(best)


def height(f: MixedHomPoly, kappa: Weights | None = None) -> Fraction:
    """h = max(1/(k1 + k2), ord f) for a degree-one polynomial."""
    kappa = kappa or f.weights
    require_not_conic(kappa)
    if f.degree != 1:
        raise DomainError(f"height is defined for degree-1 functions, got degree {f.degree}")
    h = max(1 / kappa.total, Fraction(global_order(f, kappa)))
    if h < 2:
        log.info("height %s < 2: below the range h >= 2 covered by the maximal bound", h)
    return h


# ---------------------------------------------------------------------------
# critical directions and local factorization


@dataclass(frozen=True)
class CriticalDirection:
    """A direction theta on S^1 where the (possibly tilted) gradient vanishes.

    ``representative`` is the point on the dilation orbit of theta with
    |x_primary| = 1 (exact when the root is rational); ``b_root`` is its other
    coordinate, i.e. the constant b of the local factorization
    f = (x_o - b |x_p|^(k_o/k_p))^n g along the primary axis p.
    ``tilt`` is the constant partial derivative removed when a weight equals
    one, applied to coordinate ``tilt_axis``.
    """

    theta: tuple[float, float]
    order_n: int
    tilt: object = 0
    b_root: object = 0
    primary_axis: int = 0
    representative: tuple = (1, 0)
    tilt_axis: int | None = None

    @property
    def angle(self) -> float:
        return math.atan2(self.theta[1], self.theta[0]) % (2 * math.pi)

    def tilted(self, f: MixedHomPoly) -> MixedHomPoly:
        if self.tilt_axis is None or self.tilt == 0:
            return f
        key = (1, 0) if self.tilt_axis == 0 else (0, 1)
        return f - MixedHomPoly({key: self.tilt}, f.weights, f.degree)

    def to_json(self) -> dict:
        return {
            "theta": [float(self.theta[0]), float(self.theta[1])],
            "order_n": self.order_n,
            "tilt": _fmt(self.tilt) if self.tilt_axis is not None else None,
            "tilt_axis": None if self.tilt_axis is None else self.tilt_axis + 1,
            "b_root": _fmt(self.b_root),
            "primary_axis": self.primary_axis + 1,
            "representative": [_fmt(v) for v in self.representative],
        }


def _theta_of(point, kappa: Weights) -> tuple[float, float]:
    return polar_decompose((float(point[0]), float(point[1])), kappa).theta


def _axis_points(exact: bool):
    z, o = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    return [(z, o), (z, -o)]


def _roots_common(polys: list[list]) -> list:
    polys = [p for p in polys]
    nonzero = [p for p in polys if p]
    if not nonzero:
        raise DegenerateInputError("gradient vanishes identically along a ray")
    g = nonzero[0]
    for p in nonzero[1:]:
        g = polyuni.gcd(g, p)
    return [r for r, _ in polyuni.real_roots(g)] if len(g) > 1 else []


def _directions_plain(f: MixedHomPoly) -> list[CriticalDirection]:
    kappa = f.weights
    d1, d2 = f.partial(0), f.partial(1)
    out = []
    for sign in (1, -1):
        for y in _roots_common([d1.restrict_x1(sign), d2.restrict_x1(sign)]):
            n = _ray_multiplicity(f, sign, y)
            rep = (Fraction(sign), y)
            out.append(CriticalDirection(_theta_of(rep, kappa), n, 0, y, 0, rep, None))
    for rep in _axis_points(True):
        if d1.value(rep) == 0 and d2.value(rep) == 0:
            n = order_at(f, rep)
            out.append(CriticalDirection(_theta_of(rep, kappa), int(n), 0, Fraction(0), 1, (rep[1], rep[0]), None))
    return out


def _directions_tilted(f: MixedHomPoly) -> list[CriticalDirection]:
    """Directions where d2 f vanishes, for weights with k1 = 1."""
    kappa = f.weights
    d1, d2 = f.partial(0), f.partial(1)
    out = []
    for sign in (1, -1):
        p = d2.restrict_x1(sign)
        if not p:
            raise DegenerateInputError("d2 f vanishes identically: the tilted phase is zero")
        for y in [r for r, _ in polyuni.real_roots(p)] if len(p) > 1 else []:
            rep = (Fraction(sign), y)
            tilt = d1.value(rep) if isinstance(y, EXACT_TYPES) else float(d1(float(sign), float(y)))
            ft = CriticalDirection((1.0, 0.0), 0, tilt, y, 0, rep, 0).tilted(f)
            n = _ray_multiplicity(ft, sign, y)
            out.append(CriticalDirection(_theta_of(rep, kappa), n, tilt, y, 0, rep, 0))
    for rep in _axis_points(True):
        if d2.value(rep) == 0:
            tilt = d1.value(rep)
            ft = CriticalDirection((0.0, 1.0), 0, tilt, 0, 1, rep, 0).tilted(f)
            n = order_at(ft, rep)
            out.append(CriticalDirection(_theta_of(rep, kappa), int(n), tilt, Fraction(0), 1, (rep[1], rep[0]), 0))
    return out


def _swap_direction(cd: CriticalDirection) -> CriticalDirection:
    return CriticalDirection(
        theta=(cd.theta[1], cd.theta[0]),
        order_n=cd.order_n,
        tilt=cd.tilt,
        b_root=cd.b_root,
        primary_axis=1 - cd.primary_axis,
        representative=(cd.representative[0], cd.representative[1]),
        tilt_axis=None if cd.tilt_axis is None else 1 - cd.tilt_axis,
    )


def critical_directions(f: MixedHomPoly, kappa: Weights | None = None) -> list[CriticalDirection]:
    """All critical directions of a degree-one f on the unit circle, by angle.

    With k1, k2 != 1 these are the zeros of grad f.  With k1 = 1 (resp.
    k2 = 1) they are the zeros of d2 f (resp. d1 f); each carries the tilt
    d1 f(theta) and the order of the tilted phase f - tilt * x1.
    """
    kappa = kappa or f.weights
    require_not_conic(kappa)
    if f.degree != 1:
        raise DomainError(f"critical directions need degree 1, got {f.degree}")
    if f.is_zero:
        raise DegenerateInputError("zero polynomial")
    if not f.is_exact:
        raise DomainError("critical directions require exact rational coefficients")
    if kappa.k1 == 1:
        dirs = _directions_tilted(f)
    elif kappa.k2 == 1:
        dirs = [_swap_direction(d) for d in _directions_tilted(f.swapped())]
    else:
        dirs = _directions_plain(f)
    return sorted(dirs, key=lambda d: d.angle)


class Factorization(NamedTuple):
    b: object
    n: int
    g_at_x0: float
    cofactor: list


def factor_at_direction(f: MixedHomPoly, x0) -> Factorization:
    """Local factorization f = (x2 - b x1^(k2/k1))^n g near x0 with x0_1 > 0.

    b = x0_2 x0_1^(-k2/k1); n is the multiplicity of b as a root of
    y -> f(1, y); the cofactor G(y) = f(1, y) / (y - b)^n is obtained by
    deflation, and g(x0) follows from the homogeneity of g (degree
    deg f - n k2).  Callers swap or reflect coordinates for other x0.
    """
    kappa = f.weights
    x01, x02 = x0
    if float(x01) == 0:
        raise DomainError("x0_1 = 0: interchange the coordinates before factoring")
    if float(x01) < 0:
        raise DomainError("x0_1 < 0: reflect x1 before factoring")
    q = kappa.k2 / kappa.k1
    if isinstance(x01, EXACT_TYPES) and isinstance(x02, EXACT_TYPES) and x01 == 1:
        b = Fraction(x02)
    else:
        b = float(x02) * float(x01) ** (-float(q))
    p = f.restrict_x1(1)
    if not p:
        raise DegenerateInputError("f vanishes identically on the ray")
    if f.is_exact and isinstance(b, Fraction):
        n = polyuni.root_multiplicity(p, b)
        cof = polyuni.deflate(p, b, n)
        g1 = float(polyuni.evaluate(cof, b))
    else:
        pf = [float(c) for c in p]
        n = _float_multiplicity(pf, float(b)) if not f.is_exact else polyuni.root_multiplicity(p, float(b))
        cof = list(np.polynomial.polynomial.polydiv(pf, np.polynomial.polynomial.polypow([-float(b), 1.0], n))[0])
        g1 = float(np.polynomial.Polynomial(pf).deriv(n)(float(b))) / math.factorial(n)
    rho = float(x01) ** (1.0 / float(kappa.k1))
    g_x0 = rho ** float(f.degree - n * kappa.k2) * g1
    return Factorization(b, n, g_x0, cof)


def factorization_residual(f: MixedHomPoly, fac: Factorization, x1, x2) -> float:
    """max |f - (x2 - b x1^q)^n g~| / max |f| over points with x1 > 0."""
    kappa = f.weights
    k1, k2 = kappa.as_floats()
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x1 <= 0):
        raise DomainError("factorization is evaluated on the half-plane x1 > 0 only")
    b = float(fac.b)
    rho = x1 ** (1.0 / k1)
    y = x2 * x1 ** (-k2 / k1)
    cof = np.polynomial.Polynomial([float(c) for c in fac.cofactor])
    gt = rho ** (float(f.degree) - fac.n * k2) * cof(y)
    recon = (x2 - b * x1 ** (k2 / k1)) ** fac.n * gt
    fv = f(x1, x2)
    return float(np.max(np.abs(fv - recon)) / max(np.max(np.abs(fv)), 1e-300))


def orient(f: MixedHomPoly, x0):
    """Swap and/or reflect coordinates so that x0 has a positive first coordinate.

    Returns (f', x0', swap, reflect) with f'(x') = f(x) under the transform.
    The larger coordinate of x0 is made primary.
    """
    swap = abs(float(x0[1])) > abs(float(x0[0]))
    g = f.swapped() if swap else f
    y = (x0[1], x0[0]) if swap else (x0[0], x0[1])
    reflect = float(y[0]) < 0
    if reflect:
        g = g.reflected(0)
        y = (-y[0], y[1])
    return g, y, swap, reflect


# ---------------------------------------------------------------------------
# damping factor


class DampingMode(str, enum.Enum):
    IDENTITY = "identity"
    GRADIENT_POWER = "gradient_power"
    POLAR_RADIUS = "polar_radius"


@dataclass(frozen=True)
class DampingSpec:
    mode: DampingMode = DampingMode.IDENTITY
    base_direction: CriticalDirection | None = None
    exponent_n: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", DampingMode(self.mode))
        if self.mode is DampingMode.GRADIENT_POWER:
            if self.base_direction is None or self.exponent_n is None:
                raise DomainError("gradient-power damping needs a critical direction and an exponent")
            if self.exponent_n < 2 or self.exponent_n != self.base_direction.order_n:
                raise DomainError(
                    f"gradient-power exponent must equal the order n >= 2 at the direction, "
                    f"got {self.exponent_n} vs {self.base_direction.order_n}"
                )

    @classmethod
    def gradient_power(cls, direction: CriticalDirection) -> "DampingSpec":
        return cls(DampingMode.GRADIENT_POWER, direction, direction.order_n)


def damping_values(f: MixedHomPoly, spec: DampingSpec, x1, x2, r=None):
    """Vectorized G_f on points away from the origin (0 is mapped to 0 or 1).

    ``r`` may carry precomputed homogeneous radii of the points.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if spec.mode is DampingMode.IDENTITY:
        return np.ones(np.broadcast(x1, x2).shape)
    kappa = f.weights
    if r is None:
        r = polar_radius(x1, x2, kappa)
    if spec.mode is DampingMode.POLAR_RADIUS:
        return r
    ft = spec.base_direction.tilted(f)
    k1, k2 = kappa.as_floats()
    n = spec.exponent_n
    with np.errstate(divide="ignore", invalid="ignore"):
        safe = np.where(r > 0, r, 1.0)
        # d_j f~ is homogeneous of degree 1 - k_j, so grad f~(theta) is a rescaling of grad f~(x)
        g1 = ft.partial(0)(x1, x2) * safe ** (k1 - 1)
        g2 = ft.partial(1)(x1, x2) * safe ** (k2 - 1)
        out = r * np.hypot(g1, g2) ** (n / (n - 1))
    return np.where(r > 0, out, 0.0)


def damping_factor(f: MixedHomPoly, kappa: Weights, spec: DampingSpec, x) -> float:
    """G_f at a single nonzero point: r(x) |grad f(theta(x))|^(n/(n-1))."""
    if float(x[0]) == 0 and float(x[1]) == 0:
        raise DomainError("damping factor is undefined at the origin")
    if spec.mode is DampingMode.IDENTITY:
        return 1.0
    r, theta = polar_decompose(x, kappa)
    if spec.mode is DampingMode.POLAR_RADIUS:
        return r
    ft = spec.base_direction.tilted(f)
    grad = math.hypot(float(ft.partial(0)(*theta)), float(ft.partial(1)(*theta)))
    n = spec.exponent_n
    return r * grad ** (n / (n - 1))


# ---------------------------------------------------------------------------
# second derivative along the critical curve


def hessian_curve_check(g: Poly2, x0, step: float = 1e-3) -> float:
    """|(g o gamma)''(x0_1) - Hess g / d22 g| along the curve d2 g(x1, gamma(x1)) = 0.

    The curve is traced by scalar Newton iterations in x2 at x0_1 - step,
    x0_1, x0_1 + step; the second derivative is a central difference.
    """
    d2 = g.partial(1)
    d22 = d2.partial(1)
    x01, x02 = float(x0[0]), float(x0[1])
    if abs(float(d2(x01, x02))) > 1e-9 * (1 + abs(float(g(x01, x02)))):
        raise DomainError("hessian_curve_check needs d2 g(x0) = 0")
    if float(d22(x01, x02)) == 0:
        raise DomainError("hessian_curve_check needs d22 g(x0) != 0")

    def gamma(x1):
        x2 = x02
        for _ in range(100):
            val = float(d2(x1, x2))
            der = float(d22(x1, x2))
            if der == 0:
                raise NumericError("curve solver hit d22 g = 0")
            delta = val / der
            x2 -= delta
            if abs(delta) <= 1e-15 * max(1.0, abs(x2)):
                return x2
        raise NumericError(f"curve solver did not converge at x1={x1}")

    vals = [float(g(x1, gamma(x1))) for x1 in (x01 - step, x01, x01 + step)]
    fd = (vals[0] - 2 * vals[1] + vals[2]) / step**2
    y2 = gamma(x01)
    exact = float(hessian_polynomial(g)(x01, y2)) / float(d22(x01, y2))
    return abs(fd - exact)
