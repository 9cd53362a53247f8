"""Averages over dilated surfaces on 3-D grids and the characteristic-function
lower bounds showing when the maximal operator cannot be bounded on L^p.

The surface is S = {(u, c + f(u))} carrying G_f^alpha psi dsigma.  For a
grid function g, A_t g(x) = int g(x - t (u, c + f(u))) psi(u) G(u)^alpha
sqrt(1 + |grad f(u)|^2) du and M g = max over a finite set of t of |A_t g|.

For g_N = 1 on [-N, N]^2 x [-1, 1] and c = 1, choosing t = y in A_y g_N at
(x, y) shows that M g_N(x, y) is at least the area of {u : |f(u)| <= 1/y,
|y u_j| <= N/2} when |x_j| < N/2.  Two families of sets inside it give
closed-form lower bounds for ||M g_N||_p^p:

* dilation: the rectangle |u_j| <= eps y^(-k_j), area 4 eps^2 y^(-(k1 + k2)),
  valid while eps y^(1 - k_j) <= N/2;
* order: the tube |u_o - b u_p^q| <= delta y^(-1/n) around a critical
  direction of order n, whose area scales like y^(-1/n).
"""

from __future__ import annotations

import csv
import enum
import io
import math
import struct
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.ndimage
import scipy.optimize

from .cutoffs import CutoffKind, CutoffSpec
from .errors import CoverageError, DomainError, UnsupportedCaseError
from .homfn import (
    CriticalDirection,
    MixedHomPoly,
    critical_directions,
    factor_at_direction,
    global_order,
)
from .oscquad import SurfaceSpec, panel_nodes

# ---------------------------------------------------------------------------
# grid functions


@dataclass(frozen=True)
class GridFunction:
    """Samples values[i, j, k] of a function at origin + spacing * (i, j, k)."""

    origin: tuple[float, float, float]
    spacing: float
    dims: tuple[int, int, int]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.spacing > 0:
            raise DomainError("grid spacing must be positive")
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 1:
            raise DomainError(f"dims must be three positive integers, got {self.dims}")
        vals = np.asarray(self.values, dtype=float)
        if vals.size != math.prod(dims):
            raise DomainError(f"{vals.size} values for dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))
        object.__setattr__(self, "values", vals.reshape(dims))

    @classmethod
    def from_function(cls, fn, origin, spacing, dims) -> "GridFunction":
        axes = [origin[i] + spacing * np.arange(dims[i]) for i in range(3)]
        X, Y, Z = np.meshgrid(*axes, indexing="ij")
        return cls(tuple(origin), spacing, tuple(dims), fn(X, Y, Z))

    def axes(self) -> list[np.ndarray]:
        return [self.origin[i] + self.spacing * np.arange(self.dims[i]) for i in range(3)]

    def points(self) -> np.ndarray:
        X, Y, Z = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)

    def upper(self) -> np.ndarray:
        return np.asarray(self.origin) + self.spacing * (np.asarray(self.dims) - 1)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.origin, self.spacing, self.dims, values)

    def sample(self, pts: np.ndarray, fill_value: float | None = None) -> np.ndarray:
        """Trilinear interpolation at pts[..., 3].

        Points outside the sampled box take ``fill_value``; with the default
        None they raise CoverageError instead.
        """
        pts = np.asarray(pts, dtype=float)
        idx = (pts - np.asarray(self.origin)) / self.spacing
        flat = idx.reshape(-1, 3).T
        if fill_value is None:
            hi = np.asarray(self.dims, dtype=float)[:, None] - 1
            if np.any(flat < -1e-9) or np.any(flat > hi + 1e-9):
                raise CoverageError([])
            flat = np.clip(flat, 0, hi)
        out = scipy.ndimage.map_coordinates(
            self.values, flat, order=1, mode="constant", cval=0.0 if fill_value is None else fill_value
        )
        return out.reshape(pts.shape[:-1])

    # flat binary layout: int64 dims[3], float64 spacing, float64 origin[3],
    # then float64 values with the z index varying fastest; all little-endian
    def to_bytes(self) -> bytes:
        head = struct.pack("<3q4d", *self.dims, self.spacing, *self.origin)
        return head + np.ascontiguousarray(self.values, dtype="<f8").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "GridFunction":
        size = struct.calcsize("<3q4d")
        d0, d1, d2, h, o0, o1, o2 = struct.unpack("<3q4d", data[:size])
        vals = np.frombuffer(data[size:], dtype="<f8")
        return cls((o0, o1, o2), h, (d0, d1, d2), vals.copy())


def box_indicator(half_widths: Sequence[float], spacing: float, margin: int = 2) -> GridFunction:
    """Indicator of the centred box prod [-a_i, a_i] on a grid covering it plus a margin."""
    a = np.asarray(half_widths, dtype=float)
    n = np.ceil(a / spacing).astype(int) + margin
    origin = tuple(-spacing * n)
    dims = tuple(2 * n + 1)

    def ind(X, Y, Z):
        return ((np.abs(X) <= a[0] + 1e-12) & (np.abs(Y) <= a[1] + 1e-12) & (np.abs(Z) <= a[2] + 1e-12)).astype(float)

    return GridFunction.from_function(ind, origin, spacing, dims)


# ---------------------------------------------------------------------------
# averaging operators


@dataclass(frozen=True)
class SurfaceRule:
    """Quadrature nodes u (m, 2), surface heights c + f(u) and weights."""

    u: np.ndarray
    height: np.ndarray
    weights: np.ndarray

    @property
    def mass(self) -> float:
        return float(self.weights.sum())


def surface_rule(spec: SurfaceSpec, panels: int = 32, order: int = 8) -> SurfaceRule:
    """Tensor Gauss-Legendre rule for psi G^alpha dsigma over the cutoff support."""
    lo1, hi1, lo2, hi2 = spec.cutoff.support_box(spec.weights)
    u1, w1 = panel_nodes(np.linspace(lo1, hi1, panels + 1), order)
    u2, w2 = panel_nodes(np.linspace(lo2, hi2, panels + 1), order)
    U1, U2 = np.meshgrid(u1, u2, indexing="ij")
    W = np.outer(w1, w2)
    f = spec.phase
    dens = spec.cutoff(U1, U2, spec.weights) * np.sqrt(1 + f.partial(0)(U1, U2) ** 2 + f.partial(1)(U1, U2) ** 2)
    if spec.alpha:
        dens = dens * spec.damping_power(U1, U2)
    W = (W * dens).ravel()
    keep = W != 0
    u = np.stack([U1.ravel()[keep], U2.ravel()[keep]], axis=1)
    return SurfaceRule(u, spec.offset_c + f(u[:, 0], u[:, 1]), W[keep])


def _surface_offsets(rule: SurfaceRule, t: float) -> np.ndarray:
    return t * np.column_stack([rule.u, rule.height])


def average_at(g: GridFunction, points, t: float, spec: SurfaceSpec, *, rule: SurfaceRule | None = None,
               fill_value: float | None = None, chunk: int = 4_000_000) -> np.ndarray:
    """A_t g at an array of points (n, 3)."""
    if not t > 0:
        raise DomainError("t must be positive")
    rule = rule or surface_rule(spec)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    off = _surface_offsets(rule, t)
    if fill_value is None:
        lo = pts.min(axis=0) - off.max(axis=0)
        hi = pts.max(axis=0) - off.min(axis=0)
        if np.any(lo < np.asarray(g.origin) - 1e-9) or np.any(hi > g.upper() + 1e-9):
            raise CoverageError([t])
    out = np.empty(len(pts))
    step = max(1, chunk // len(off))
    for s in range(0, len(pts), step):
        block = pts[s : s + step, None, :] - off[None, :, :]
        vals = g.sample(block, fill_value=0.0 if fill_value is None else fill_value)
        out[s : s + step] = vals @ rule.weights
    return out


def average_operator(g: GridFunction, t: float, spec: SurfaceSpec, out: GridFunction | None = None,
                     fill_value: float | None = None, rule: SurfaceRule | None = None) -> GridFunction:
    """A_t g on the points of ``out`` (default: the grid of g itself).

    With fill_value None every surface point must stay inside the grid of
    g; otherwise g is extended by fill_value outside its box.
    """
    out = out or g
    vals = average_at(g, out.points(), t, spec, rule=rule, fill_value=fill_value)
    return out.with_values(vals)


def maximal_at(g: GridFunction, points, t_set: Sequence[float], spec: SurfaceSpec, *,
               rule: SurfaceRule | None = None, fill_value: float | None = None) -> np.ndarray:
    if len(t_set) == 0:
        raise DomainError("t_set is empty")
    rule = rule or surface_rule(spec)
    bad = []
    best = None
    for t in t_set:
        try:
            a = np.abs(average_at(g, points, t, spec, rule=rule, fill_value=fill_value))
        except CoverageError:
            bad.append(t)
            continue
        best = a if best is None else np.maximum(best, a)
    if bad:
        raise CoverageError(bad)
    return best


def maximal_function(g: GridFunction, t_set: Sequence[float], spec: SurfaceSpec, out: GridFunction | None = None,
                     fill_value: float | None = None, rule: SurfaceRule | None = None) -> GridFunction:
    """max over t in t_set of |A_t g|, pointwise on the grid of ``out``."""
    out = out or g
    return out.with_values(maximal_at(g, out.points(), t_set, spec, rule=rule, fill_value=fill_value))


def quarter_octaves(lo: float, hi: float) -> list[float]:
    """t = 2^(j/4) for all j with lo <= t <= hi."""
    j0 = math.ceil(4 * math.log2(lo) - 1e-9)
    j1 = math.floor(4 * math.log2(hi) + 1e-9)
    return [2.0 ** (j / 4) for j in range(j0, j1 + 1)]


# ---------------------------------------------------------------------------
# lower-bound witnesses


class Variant(str, enum.Enum):
    DILATION = "dilation"
    ORDER = "order"


def _edge_max(f: MixedHomPoly, eps: float) -> float:
    """max |f| over the boundary of the square [-eps, eps]^2, via critical points of the edge polynomials."""
    best = 0.0
    for fixed_axis in (0, 1):
        for sgn in (-1.0, 1.0):
            coeffs = np.zeros(f.total_degree + 1)
            for a, b, c in f.monomials():
                if fixed_axis == 0:
                    coeffs[b] += float(c) * (sgn * eps) ** a
                else:
                    coeffs[a] += float(c) * (sgn * eps) ** b
            p = np.polynomial.Polynomial(coeffs)
            cand = [-eps, eps]
            if p.degree() >= 2:
                cand += [r.real for r in p.deriv().roots() if abs(r.imag) < 1e-12 and abs(r.real) <= eps]
            best = max(best, float(np.max(np.abs(p(np.asarray(cand))))))
    return best


def epsilon_for(f: MixedHomPoly, max_halvings: int = 60) -> float:
    """Largest dyadic eps <= 1 with |f| <= 1 on [-eps, eps]^2.

    f is degree-1 homogeneous with positive weights, so max |f| over the
    square is attained on its boundary and grows with eps.
    """
    eps = 1.0
    for _ in range(max_halvings):
        if _edge_max(f, eps) <= 1.0:
            return eps
        eps /= 2
    raise DomainError("no dyadic eps found; f is too large near the origin")


@dataclass(frozen=True)
class Tube:
    """Oriented tube geometry around a critical direction.

    In oriented coordinates (p, o) with x0_p > 0 the tube at scale y is
    |u_o - b u_p^q| <= delta y^(-1/n) intersected with the disc of radius
    delta |x0| about x0.
    """

    direction: CriticalDirection
    delta: float
    b: float
    q: float
    n: int
    x0: tuple[float, float]
    swap: bool
    reflect: bool
    gmax: float

    @property
    def radius(self) -> float:
        return self.delta * math.hypot(*self.x0)

    def to_original(self, pts: np.ndarray) -> np.ndarray:
        """Map oriented (p, o) points back to the original coordinates."""
        pts = np.array(pts, dtype=float)
        if self.reflect:
            pts[:, 0] = -pts[:, 0]
        return pts[:, ::-1] if self.swap else pts

    def coordinate_bound(self) -> float:
        """max |u_j| over the disc, in original coordinates."""
        return max(abs(self.x0[0]), abs(self.x0[1])) + self.radius

    def area(self, y: float, nodes: int = 64) -> float:
        """Area of the tube at scale y by quadrature in the sheared variable z = u_o - b u_p^q."""
        w = self.delta * y ** (-1.0 / self.n)
        zs, zw = panel_nodes(np.linspace(-w, w, 9), nodes // 8)
        lengths = np.array([self._section(z) for z in zs])
        return float(lengths @ zw)

    def _section(self, z: float) -> float:
        p0, o0 = self.x0
        R = self.radius

        def inside(up):
            return R * R - (up - p0) ** 2 - (z + self.b * up**self.q - o0) ** 2

        grid = np.linspace(max(p0 - R, 1e-300), p0 + R, 401)
        vals = inside(grid)
        pos = np.nonzero(vals > 0)[0]
        if pos.size == 0:
            return 0.0
        i0, i1 = pos[0], pos[-1]
        left = grid[i0] if i0 == 0 else scipy.optimize.brentq(inside, grid[i0 - 1], grid[i0], xtol=1e-15)
        right = grid[i1] if i1 == len(grid) - 1 else scipy.optimize.brentq(inside, grid[i1], grid[i1 + 1], xtol=1e-15)
        return right - left


def order_tube(f: MixedHomPoly, direction: CriticalDirection | None = None, delta: float = 0.125,
               max_halvings: int = 20) -> Tube:
    """Tube data for the order construction; delta is halved until it is admissible.

    Admissible means: the disc stays in the half-plane where the local
    factorization holds, and delta^n max |g| <= 1 on the disc so that
    |f| <= 1/y on the tube at scale y.
    """
    if direction is None:
        dirs = critical_directions(f)
        if not dirs:
            raise DomainError("the phase has no critical direction")
        direction = max(dirs, key=lambda d: d.order_n)
    if direction.order_n < 2:
        raise DomainError("the order construction needs a critical direction of order >= 2")
    if direction.tilt_axis is not None and direction.tilt != 0:
        raise UnsupportedCaseError("the order construction is not defined for tilted directions")
    # representative is (x_p, x_o) in primary-axis order
    swap = direction.primary_axis == 1
    reflect = float(direction.representative[0]) < 0
    g = f.swapped() if swap else f
    if reflect:
        g = g.reflected(0)
    rep = direction.representative
    x0 = (abs(rep[0]), rep[1])
    kappa = g.weights
    q = float(kappa.k2 / kappa.k1)
    fac = factor_at_direction(g, x0)
    x0 = (float(x0[0]), float(x0[1]))
    if fac.n != direction.order_n:
        raise DomainError(f"factorization order {fac.n} differs from the direction order {direction.order_n}")
    k1, k2 = kappa.as_floats()
    cof = np.polynomial.Polynomial([float(c) for c in fac.cofactor])
    for _ in range(max_halvings):
        R = delta * math.hypot(*x0)
        if R < x0[0]:
            ang = np.linspace(0, 2 * np.pi, 256)
            rad = np.linspace(0, R, 32)
            P = x0[0] + np.outer(rad, np.cos(ang))
            O = x0[1] + np.outer(rad, np.sin(ang))
            gval = P ** ((float(g.degree) - fac.n * k2) / k1) * cof(O * P ** (-q))
            gmax = float(np.max(np.abs(gval))) * 1.05
            if delta**fac.n * gmax <= 1.0:
                return Tube(direction, delta, float(fac.b), q, fac.n, x0, swap, reflect, gmax)
        delta /= 2
    raise DomainError("no admissible delta found for the order construction")


def lower_bound_witness(spec: SurfaceSpec, epsilon: float | None, y: float, variant: Variant | str,
                        tube: Tube | None = None) -> float:
    """Lower bound for M g_N(x, y) from the dilation rectangle or the order tube."""
    variant = Variant(variant)
    if not y >= 1:
        raise DomainError("the witness is defined for y >= 1")
    kappa = spec.weights
    if variant is Variant.DILATION:
        if not (kappa.k1 < 1 and kappa.k2 < 1):
            raise DomainError("the dilation construction needs both weights below 1")
        eps = epsilon_for(spec.phase) if epsilon is None else float(epsilon)
        if not eps > 0:
            raise DomainError("epsilon must be positive")
        return 4 * eps * eps * y ** (-float(kappa.total))
    tube = tube or order_tube(spec.phase)
    return tube.area(y)


# ---------------------------------------------------------------------------
# sharpness experiment


class Verdict(str, enum.Enum):
    DIVERGES = "Diverges"
    BOUNDED = "Bounded"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class SharpnessReport:
    """Normalized lower bounds norms[i] >= ||M g_N||_p^p / ||g_N||_p^p per N.

    growth_ratios[i] = norms[i+1] / norms[i]; increment_ratios compare
    successive increments norms[i+1] - norms[i] and drive the verdict.
    """

    p: float
    variant: Variant
    N_list: tuple[int, ...]
    norms: tuple[float, ...]
    growth_ratios: tuple[float, ...]
    increment_ratios: tuple[float, ...]
    verdict: Verdict
    diverge_at: float
    bounded_at: float
    y_exponent: float
    crosscheck: dict | None = None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "variant": self.variant.value,
            "N_list": list(self.N_list),
            "norms": list(self.norms),
            "ratios": list(self.growth_ratios),
            "increment_ratios": list(self.increment_ratios),
            "verdict": self.verdict.value,
            "diverge_at": self.diverge_at,
            "bounded_at": self.bounded_at,
            "y_exponent": self.y_exponent,
            "crosscheck": self.crosscheck,
        }

    def to_csv(self, config_hash: str = "") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["N", "norm", "growth_ratio", "increment_ratio", "config_hash"])
        rows = zip(self.N_list, self.norms, [""] + list(self.growth_ratios), ["", ""] + list(self.increment_ratios))
        for N, nrm, r, ir in rows:
            w.writerow([N, repr(nrm), r if r == "" else repr(r), ir if ir == "" else repr(ir), config_hash])
        return buf.getvalue()


def _power_integral(a: float, upper: float) -> float:
    """int_1^upper y^(-a) dy (zero when upper <= 1)."""
    if upper <= 1:
        return 0.0
    if a == 1:
        return math.log(upper)
    return math.expm1((1 - a) * math.log(upper)) / (1 - a)


def y_cap(spec: SurfaceSpec, N: float, variant: Variant | str, *, epsilon: float | None = None,
          tube: Tube | None = None) -> float:
    """Largest y of the region where the witness bounds M g_N from below."""
    variant = Variant(variant)
    if variant is Variant.DILATION:
        eps = epsilon_for(spec.phase) if epsilon is None else epsilon
        return min((N / (2 * eps)) ** (1 / (1 - float(kj))) for kj in (spec.weights.k1, spec.weights.k2))
    tube = tube or order_tube(spec.phase)
    # the shifted points x - y u must stay in [-N, N]^2 for |x_j| < N/2
    return min(tube.delta * N, N / (2 * tube.coordinate_bound()))


def witness_norm(spec: SurfaceSpec, p: float, N: float, variant: Variant | str, *, epsilon: float | None = None,
                 tube: Tube | None = None, tube_constant: float | None = None) -> float:
    """Closed-form lower bound for ||M g_N||_p^p / ||g_N||_p^p.

    The p-th power of the witness is integrated over {|x_j| < N/2} (volume
    N^2) times 1 < y <= y_cap; ||g_N||_p^p = 8 N^2.
    """
    variant = Variant(variant)
    upper = y_cap(spec, N, variant, epsilon=epsilon, tube=tube)
    if variant is Variant.DILATION:
        eps = epsilon_for(spec.phase) if epsilon is None else epsilon
        return (4 * eps * eps) ** p * _power_integral(p * float(spec.weights.total), upper) / 8
    tube = tube or order_tube(spec.phase)
    c = tube_constant if tube_constant is not None else tube.area(1.0)
    return c**p * _power_integral(p / tube.n, upper) / 8


def classify(increment_ratios: Sequence[float], diverge_at: float = 0.999, bounded_at: float = 0.95) -> Verdict:
    """Verdict from the last two increment ratios.

    Increments that do not shrink mean the bound grows without limit (at
    least logarithmically); a ratio bounded below one is a convergent
    geometric tail.
    """
    if len(increment_ratios) < 2:
        return Verdict.INCONCLUSIVE
    last = increment_ratios[-2:]
    if all(r >= diverge_at for r in last):
        return Verdict.DIVERGES
    if all(r <= bounded_at for r in last):
        return Verdict.BOUNDED
    return Verdict.INCONCLUSIVE


def default_variant(spec: SurfaceSpec) -> Variant:
    """The construction whose exponent realizes the height."""
    kappa = spec.weights
    dilation_ok = kappa.k1 < 1 and kappa.k2 < 1
    if dilation_ok and 1 / kappa.total >= global_order(spec.phase):
        return Variant.DILATION
    return Variant.ORDER


def sharpness_cutoff() -> CutoffSpec:
    """Radial bump of radius 2 around 0, scaled to exceed 1 on the unit square and near (0, +-1), (+-1, 0)."""
    return CutoffSpec(CutoffKind.RADIAL, (0.0, 0.0), 2.0, 3.0)


def require_sharpness_cutoff(spec: SurfaceSpec, region: np.ndarray) -> None:
    vals = spec.cutoff(region[:, 0], region[:, 1], spec.weights)
    if np.min(vals) <= 1.0:
        raise DomainError(f"the cutoff must exceed 1 on the witness region (min {np.min(vals):.3g})")


def sharpness_experiment(
    spec: SurfaceSpec,
    p: float,
    N_list: Sequence[int] = (64, 128, 256, 512, 1024),
    variant: Variant | str | None = None,
    *,
    diverge_at: float = 0.999,
    bounded_at: float = 0.95,
    crosscheck_N: int | None = None,
    crosscheck_points: int = 10,
    seed: int = 0,
) -> SharpnessReport:
    """Growth of the closed-form lower bound for ||M g_N||_p^p / ||g_N||_p^p over N_list.

    With crosscheck_N the bound is compared against maximal_function on a
    grid at random points of the witness region; a miss beyond 2x makes the
    verdict Inconclusive.
    """
    if not p > 0:
        raise DomainError("p must be positive")
    if abs(spec.offset_c - 1) > 1e-12:
        raise DomainError("the construction assumes offset c = 1")
    N_list = tuple(int(n) for n in N_list)
    if len(N_list) < 3 or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise DomainError("N_list must be increasing with at least three entries")
    variant = default_variant(spec) if variant is None else Variant(variant)
    tube = order_tube(spec.phase) if variant is Variant.ORDER else None
    eps = epsilon_for(spec.phase) if variant is Variant.DILATION else None
    if variant is Variant.DILATION and not (spec.weights.k1 < 1 and spec.weights.k2 < 1):
        raise DomainError("the dilation construction needs both weights below 1")
    require_sharpness_cutoff(spec, _witness_region_sample(variant, eps, tube))
    const = tube.area(1.0) if tube is not None else None
    norms = [witness_norm(spec, p, N, variant, epsilon=eps, tube=tube, tube_constant=const) for N in N_list]
    ratios = tuple(b / a if a > 0 else math.inf for a, b in zip(norms, norms[1:]))
    incs = np.diff(norms)
    inc_ratios = tuple(float(b / a) if a > 0 else math.inf for a, b in zip(incs, incs[1:]))
    verdict = classify(inc_ratios, diverge_at, bounded_at)
    y_exp = p * float(spec.weights.total) if variant is Variant.DILATION else p / tube.n
    cross = None
    if crosscheck_N:
        cross = crosscheck(spec, crosscheck_N, variant, eps=eps, tube=tube, points=crosscheck_points, seed=seed)
        if not cross["ok"]:
            verdict = Verdict.INCONCLUSIVE
    return SharpnessReport(
        float(p), variant, N_list, tuple(norms), ratios, inc_ratios, verdict, diverge_at, bounded_at, y_exp, cross
    )


def _witness_region_sample(variant: Variant, eps, tube: Tube | None) -> np.ndarray:
    """Points covering the u-region used by the witness (its largest extent, y = 1)."""
    if variant is Variant.DILATION:
        a = np.linspace(-eps, eps, 21)
        U1, U2 = np.meshgrid(a, a)
        return np.column_stack([U1.ravel(), U2.ravel()])
    ang = np.linspace(0, 2 * np.pi, 64)
    pts = []
    for rr in np.linspace(0, tube.radius, 8):
        pts.append(np.column_stack([tube.x0[0] + rr * np.cos(ang), tube.x0[1] + rr * np.sin(ang)]))
    return tube.to_original(np.vstack(pts))


def crosscheck(spec: SurfaceSpec, N: int, variant: Variant, *, eps=None, tube: Tube | None = None,
               points: int = 10, seed: int = 0, spacing: float = 0.05, panels: int = 96) -> dict:
    """maximal_function on a grid at random points of the witness region versus the witness.

    g_N vanishes outside its box, so sampling it with fill value 0 beyond
    the grid is exact.  Sample heights are quarter-octave values so that
    t = y belongs to the t-set.
    """
    rng = np.random.default_rng(seed)
    ys = quarter_octaves(1.0 + 1e-9, y_cap(spec, N, variant, epsilon=eps, tube=tube))
    if not ys:
        raise DomainError(f"N={N} leaves no admissible y")
    g = box_indicator((N, N, 1.0), spacing)
    rule = surface_rule(spec, panels=panels, order=8)
    y = rng.choice(ys, size=points)
    x = rng.uniform(-N / 2, N / 2, size=(points, 2)) * 0.999
    pts = np.column_stack([x, y])
    mvals = maximal_at(g, pts, ys, spec, rule=rule, fill_value=0.0)
    wit = np.array([lower_bound_witness(spec, eps, yy, variant, tube=tube) for yy in y])
    ratio = mvals / wit
    return {
        "N": N,
        "seed": seed,
        "points": pts.tolist(),
        "maximal": mvals.tolist(),
        "witness": wit.tolist(),
        "min_ratio": float(ratio.min()),
        "ok": bool(np.all(ratio >= 0.5)),
    }
