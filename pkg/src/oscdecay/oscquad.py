"""Damped oscillatory integrals over mixed homogeneous surfaces.

The production path evaluates

    J(t, s) = int a(x) G_f(x)^alpha exp(i t (f(x) + x.s)) dx

by splitting the amplitude with the anisotropic dyadic partition
psi(delta_{2^k} x) and rescaling every piece to the unit annulus, where it
reads 2^(-k(alpha + k1 + k2)) int a(delta_{2^-k} y) psi(y) G(y)^alpha
exp(i t 2^-k (f(y) + y.sigma)) dy with sigma_j = 2^(k(1 - k_j)) s_j.  Each
piece is integrated with tensor Gauss-Legendre panels whose width is tied to
the local phase gradient.  ``quadrature_oracle`` is a plain uniform tensor
rule used to cross-check it.
"""

from __future__ import annotations

import enum
import json
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np
import scipy.ndimage
import scipy.optimize

from .cutoffs import CutoffSpec, annular_piece, smooth_step
from .errors import DomainError, NumericError
from .homfn import (
    DampingMode,
    DampingSpec,
    MixedHomPoly,
    Weights,
    damping_values,
    polar_radius,
)

log = logging.getLogger(__name__)

# phase advance allowed across one panel; a 32-point rule is exact to
# rounding for exp(i w x) on [-1, 1] up to w ~ 30, i.e. 60 rad per panel,
# and the 24-point companion used for the error estimate is good to 1e-10
# at 48 rad
PHASE_BUDGET = 48.0
GL_HIGH = 32
GL_LOW = 24
ATOL = 1e-12
MAX_DYADIC_PIECES = 60
MAX_LEVEL = 4
CHUNK = 2_000_000


@lru_cache(maxsize=None)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def panel_nodes(edges: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on consecutive panels [e_i, e_i+1]."""
    return _nodes_on(edges[:-1], edges[1:], n)


def _nodes_on(left: np.ndarray, right: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gauss(n)
    a = np.asarray(left, dtype=float)[:, None]
    b = np.asarray(right, dtype=float)[:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


# ---------------------------------------------------------------------------
# specs and results


@dataclass(frozen=True)
class SurfaceSpec:
    """The measure G_f^alpha psi dsigma on the graph of c + f."""

    phase: MixedHomPoly
    cutoff: CutoffSpec = field(default_factory=CutoffSpec)
    offset_c: float = 0.0
    alpha: float = 0.0
    damping: DampingSpec = field(default_factory=DampingSpec)

    def __post_init__(self):
        if self.phase.degree != 1:
            raise DomainError(f"the phase must have degree 1, got {self.phase.degree}")
        if self.alpha < 0:
            raise DomainError("only alpha >= 0 is supported")

    @property
    def weights(self) -> Weights:
        return self.phase.weights

    def with_alpha(self, alpha: float) -> "SurfaceSpec":
        return SurfaceSpec(self.phase, self.cutoff, self.offset_c, alpha, self.damping)

    def with_cutoff(self, cutoff: CutoffSpec) -> "SurfaceSpec":
        return SurfaceSpec(self.phase, cutoff, self.offset_c, self.alpha, self.damping)

    def with_offset(self, c: float) -> "SurfaceSpec":
        return SurfaceSpec(self.phase, self.cutoff, c, self.alpha, self.damping)

    def damping_power(self, x1, x2, r=None):
        """G_f^alpha, sharing a precomputed homogeneous radius when given."""
        if self.alpha == 0 or self.damping.mode is DampingMode.IDENTITY:
            return np.ones(np.broadcast(np.asarray(x1), np.asarray(x2)).shape)
        return damping_values(self.phase, self.damping, x1, x2, r) ** self.alpha

    def sup_damping_on_circle(self, samples: int = 2048) -> float:
        """max of G_f over the unit circle (sampled, with a 2% margin)."""
        if self.damping.mode is DampingMode.IDENTITY:
            return 1.0
        ang = np.linspace(0, 2 * np.pi, samples, endpoint=False)
        damp = self.with_alpha(1.0).damping_power(np.cos(ang), np.sin(ang))
        return float(np.max(damp)) * 1.02


class Path(str, enum.Enum):
    DYADIC = "dyadic"
    ORACLE = "oracle"


@dataclass(frozen=True)
class OscResult:
    value: complex
    abs_error_estimate: float
    subdivisions: int
    path: Path
    converged: bool = True

    def __abs__(self):
        return abs(self.value)


# ---------------------------------------------------------------------------
# integration coordinates


@dataclass(frozen=True)
class Shear:
    """Coordinates (u, z) with x_p = u, x_o = z + b |u|^q on the side sign(u) = side.

    The Jacobian is one.  For GradientPower damping the critical curve
    becomes the line z = 0, where G^alpha has its only non-smooth behaviour.
    """

    primary: int = 0
    b: float = 0.0
    q: float = 1.0
    side: int = 1

    @property
    def trivial(self) -> bool:
        return self.b == 0.0

    def offset(self, u):
        u = np.asarray(u, dtype=float)
        on = np.sign(u) == self.side
        return np.where(on, self.b * np.abs(u) ** self.q, 0.0)

    def doffset(self, u):
        u = np.asarray(u, dtype=float)
        on = (np.sign(u) == self.side) & (u != 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = self.b * self.q * np.abs(u) ** (self.q - 1) * np.sign(u)
        return np.where(on, d, 0.0)

    def to_x(self, u, z):
        o = z + self.offset(u)
        return (u, o) if self.primary == 0 else (o, u)

    def box(self, box):
        """Box in (u, z) covering the image of an x-box."""
        lo1, hi1, lo2, hi2 = box
        ulo, uhi, olo, ohi = (lo1, hi1, lo2, hi2) if self.primary == 0 else (lo2, hi2, lo1, hi1)
        if self.trivial:
            return (ulo, uhi, olo, ohi)
        us = np.linspace(ulo, uhi, 513)
        off = self.offset(us)
        return (ulo, uhi, olo - float(off.max()), ohi - float(off.min()))

    def singular_u(self) -> list[float]:
        return [] if self.trivial or float(self.q).is_integer() else [0.0]


def shear_for(spec: SurfaceSpec) -> tuple[Shear, list[float]]:
    """Integration coordinates adapted to the damping factor of ``spec``."""
    if spec.alpha == 0 or spec.damping.mode is not DampingMode.GRADIENT_POWER:
        return Shear(), []
    cd = spec.damping.base_direction
    kappa = spec.weights
    p = cd.primary_axis
    o = 1 - p
    side = 1 if float(cd.representative[0]) > 0 else -1
    q = float(kappa[o] / kappa[p])
    sh = Shear(primary=p, b=float(cd.b_root), q=q, side=side)
    return sh, [0.0]


# ---------------------------------------------------------------------------
# tensor panel engine


class _Integrand(NamedTuple):
    """Callbacks on integration coordinates (u, z)."""

    value: Callable  # complex integrand incl. Jacobian
    magnitude: Callable  # |non-oscillatory part|, used for the support mask
    phase_grad: Callable  # (|d_u phase|, |d_z phase|)


def _breakpoints(lo: float, hi: float, cells: int, singular: Iterable[float]) -> np.ndarray:
    pts = list(np.linspace(lo, hi, cells + 1))
    width = (hi - lo) / cells
    for s in singular:
        if not lo <= s <= hi:
            continue
        pts.append(s)
        for m in range(16):
            d = width * 4.0**-m
            pts.extend((s - d, s + d))
    pts = np.unique(np.clip(pts, lo, hi))
    keep = np.concatenate(([True], np.diff(pts) > 1e-14 * max(1.0, hi - lo)))
    return pts[keep]


def _panel_edges(cell_edges: np.ndarray, counts: np.ndarray) -> list[np.ndarray]:
    return [np.linspace(a, b, int(m) + 1) for a, b, m in zip(cell_edges[:-1], cell_edges[1:], counts)]


def tensor_panels(
    integrand: _Integrand,
    box: tuple[float, float, float, float],
    *,
    budget: float = PHASE_BUDGET,
    cells: int = 32,
    singular_u: Sequence[float] = (),
    singular_z: Sequence[float] = (),
    floor: float = 0.0,
) -> tuple[complex, complex, int]:
    """Integrate over a (u, z) box with oscillation-sized tensor panels.

    The box is cut into cells (uniform plus geometric grading towards the
    singular lines).  Cells where the sampled magnitude stays below
    ``floor``, and whose neighbours do too, are skipped.  Within column i
    the u-panel width is budget / max |d_u phase| over the active part of
    that column; every cell then gets its own z-panel width from the bound
    on |d_z phase| in that cell.  Returns the high- and low-order results and the
    panel count.
    """
    ulo, uhi, zlo, zhi = box
    if not (uhi > ulo and zhi > zlo):
        return 0j, 0j, 0
    ue = _breakpoints(ulo, uhi, cells, singular_u)
    ze = _breakpoints(zlo, zhi, cells, singular_z)
    nu, nz = len(ue) - 1, len(ze) - 1
    su = np.sort(np.concatenate([ue, 0.5 * (ue[:-1] + ue[1:])]))
    sz = np.sort(np.concatenate([ze, 0.5 * (ze[:-1] + ze[1:])]))
    U, Z = np.meshgrid(su, sz, indexing="ij")
    mag = integrand.magnitude(U, Z)
    gu, gz = integrand.phase_grad(U, Z)

    def cellmax(a):
        m = scipy.ndimage.maximum_filter(a, size=3, mode="nearest")
        return m[1::2, 1::2]

    active = cellmax(mag) > floor
    active = scipy.ndimage.binary_dilation(active, structure=np.ones((3, 3), bool))
    if not active.any():
        return 0j, 0j, 0
    bu = np.where(active, cellmax(gu), 0.0) * 1.25
    bz = np.where(active, cellmax(gz), 0.0) * 1.25
    wu = np.diff(ue)
    wz = np.diff(ze)
    mu = np.maximum(1, np.ceil(bu.max(axis=1) * wu / budget)).astype(int)
    mz = np.maximum(1, np.ceil(bz * wz[None, :] / budget)).astype(int)
    upanels = _panel_edges(ue, mu)

    totals = {GL_HIGH: 0j, GL_LOW: 0j}
    count = 0
    for i in range(nu):
        rows = np.nonzero(active[i])[0]
        if rows.size == 0:
            continue
        m = mz[i, rows]
        count += int(mu[i]) * int(m.sum())
        # z-panels of this column: row j split into m_j equal panels
        left = np.repeat(ze[rows], m)
        width = np.repeat(wz[rows] / m, m)
        left = left + width * (np.arange(m.sum()) - np.repeat(np.cumsum(m) - m, m))
        for n in (GL_HIGH, GL_LOW):
            un, uw = panel_nodes(upanels[i], n)
            zs, zw = _nodes_on(left, left + width, n)
            step = max(1, CHUNK // max(un.size, 1))
            acc = 0j
            for c in range(0, zs.size, step):
                vals = integrand.value(un[:, None], zs[None, c : c + step])
                vals = np.broadcast_to(vals, (un.size, min(step, zs.size - c)))
                acc += complex(uw @ vals @ zw[c : c + step])
            totals[n] += acc
    return totals[GL_HIGH], totals[GL_LOW], count


def _adaptive(integrand, box, target: Callable[[complex], float], singular_u, singular_z, max_level=MAX_LEVEL):
    """Refine until the high/low discrepancy meets ``target(value)``.

    Each level doubles the cells and shrinks the phase budget by sqrt(2).
    Cells whose magnitude cannot contribute more than 1e-2 of the absolute
    target are dropped.
    """
    area = (box[1] - box[0]) * (box[3] - box[2])
    floor = 1e-2 * target(0j) / area if area > 0 else 0.0
    best = None
    for level in range(max_level + 1):
        hi, lo, count = tensor_panels(
            integrand,
            box,
            budget=PHASE_BUDGET / 2 ** (level / 2),
            cells=32 * 2**level,
            singular_u=singular_u,
            singular_z=singular_z,
            floor=floor,
        )
        est = abs(hi - lo)
        best = (hi, est, count)
        if est <= target(hi):
            return best
    raise NumericError(
        f"tolerance not reached after {max_level} refinements (estimate {best[1]:.3e})",
        best=best[0],
        error_estimate=best[1],
    )


# ---------------------------------------------------------------------------
# integrands


def _make_integrand(
    spec: SurfaceSpec,
    t: float,
    lin: tuple[float, float],
    amplitude: Callable,
    shear: Shear,
    k: int | None,
    rescaled: bool,
    inner: bool = False,
) -> _Integrand:
    """Integrand of one dyadic piece (or of the whole integral when k is None).

    With inner=True the piece is the remainder sum_{j >= k} psi(delta_{2^j} x)
    = 1 - H(log2 r(x) + k - 1) around the origin instead of an annulus.

    rescaled=True works in y = delta_{2^k} x with phase t 2^-k f(y) +
    sum_j lin_j 2^(-k k_j) y_j and amplitude a(delta_{2^-k} y) psi(y)
    G(y)^alpha; the caller multiplies by 2^(-k(alpha + k1 + k2)).
    rescaled=False integrates a(x) psi(delta_{2^k} x) G(x)^alpha e^{i(t f + lin.x)}
    directly in x.
    """
    kappa = spec.weights
    k1, k2 = kappa.as_floats()
    f = spec.phase
    d1, d2 = f.partial(0), f.partial(1)
    if k is not None and rescaled:
        s1, s2 = 2.0 ** (-k * k1), 2.0 ** (-k * k2)
        tt = t * 2.0**-k
        l1, l2 = lin[0] * s1, lin[1] * s2
    else:
        s1 = s2 = 1.0
        tt = t
        l1, l2 = lin
    shift = 2.0 ** k if k is not None else 1.0
    need_r = k is not None or (spec.alpha != 0 and spec.damping.mode is not DampingMode.IDENTITY)

    def geometry(U, Z):
        y1, y2 = shear.to_x(U, Z)
        r = polar_radius(y1, y2, kappa) if need_r else None
        if k is None:
            piece = 1.0
        else:
            rr = r if rescaled else r * shift
            with np.errstate(divide="ignore"):
                v = np.log2(rr)
            piece = 1.0 - smooth_step(v - 1.0) if inner else annular_piece(v)
        return y1, y2, r, piece

    def base(U, Z):
        y1, y2, r, piece = geometry(U, Z)
        x1, x2 = y1 * s1, y2 * s2
        amp = amplitude(x1, x2)
        return y1, y2, r, piece, amp

    def value(U, Z):
        y1, y2, r, piece, amp = base(U, Z)
        w = amp * piece
        if spec.alpha != 0 and spec.damping.mode is not DampingMode.IDENTITY:
            w = w * spec.damping_power(y1, y2, r)
        ph = tt * f(y1, y2) + l1 * y1 + l2 * y2
        return w * np.exp(1j * ph)

    def magnitude(U, Z):
        _, _, _, piece, amp = base(U, Z)
        return np.abs(amp * piece)

    def phase_grad(U, Z):
        y1, y2 = shear.to_x(U, Z)
        g1 = tt * d1(y1, y2) + l1
        g2 = tt * d2(y1, y2) + l2
        gp, go = (g1, g2) if shear.primary == 0 else (g2, g1)
        gu = gp + go * shear.doffset(U)
        return np.abs(gu), np.abs(go)

    return _Integrand(value, magnitude, phase_grad)


def _piece_box(spec: SurfaceSpec, k: int | None, rescaled: bool, support) -> tuple | None:
    """x- or y-box of one dyadic piece intersected with the amplitude support."""
    k1, k2 = spec.weights.as_floats()
    lo1, hi1, lo2, hi2 = support
    if k is None:
        return support
    if rescaled:
        s1, s2 = 2.0 ** (k * k1), 2.0 ** (k * k2)
        lo1, hi1, lo2, hi2 = lo1 * s1, hi1 * s1, lo2 * s2, hi2 * s2
        a1, a2 = 4.0**k1, 4.0**k2
    else:
        a1, a2 = (4.0 * 2.0**-k) ** k1, (4.0 * 2.0**-k) ** k2
    box = (max(lo1, -a1), min(hi1, a1), max(lo2, -a2), min(hi2, a2))
    if box[0] >= box[1] or box[2] >= box[3]:
        return None
    return box


def _radius_range(spec: SurfaceSpec, support) -> tuple[float, float]:
    """Lower and upper bounds of r(x) over a box."""
    lo1, hi1, lo2, hi2 = support
    kappa = spec.weights
    far1, far2 = max(abs(lo1), abs(hi1)), max(abs(lo2), abs(hi2))
    near1 = 0.0 if lo1 <= 0 <= hi1 else min(abs(lo1), abs(hi1))
    near2 = 0.0 if lo2 <= 0 <= hi2 else min(abs(lo2), abs(hi2))
    r_hi = float(polar_radius(far1, far2, kappa))
    r_lo = float(polar_radius(near1, near2, kappa))
    return r_lo, r_hi


def _phase_span(spec: SurfaceSpec, t: float, lin, k: int) -> float:
    """Upper bound for the phase variation of piece k on its rescaled box |y_j| <= 4^k_j."""
    k1, k2 = spec.weights.as_floats()
    a1, a2 = 4.0**k1, 4.0**k2
    fmax = sum(abs(float(c)) * a1**i * a2**j for i, j, c in spec.phase.monomials())
    return 2 * (abs(t) * 2.0**-k * fmax + abs(lin[0]) * 2.0 ** (-k * k1) * a1 + abs(lin[1]) * 2.0 ** (-k * k2) * a2)


def dyadic_range(spec: SurfaceSpec, support, t: float = 0.0, lin=(0.0, 0.0)) -> tuple[int, int, bool]:
    """First and last piece index and whether the last one is the inner remainder.

    When the support reaches the origin the annuli stop at the first index
    whose rescaled phase varies by less than one panel budget; everything
    closer to the origin is integrated as a single remainder piece.
    """
    r_lo, r_hi = _radius_range(spec, support)
    k0 = math.floor(1 - math.log2(r_hi))
    if r_lo > 0:
        return k0, math.floor(2 - math.log2(r_lo)), False
    k = k0 + 1
    while k < k0 + MAX_DYADIC_PIECES - 1 and _phase_span(spec, t, lin, k) > PHASE_BUDGET:
        k += 1
    return k0, k, True


def _cutoff_amplitude(spec: SurfaceSpec, multiplier: Callable | None = None, surface: bool = False):
    kappa = spec.weights
    f = spec.phase
    d1, d2 = f.partial(0), f.partial(1)

    def amp(x1, x2):
        a = spec.cutoff(x1, x2, kappa)
        if surface:
            a = a * np.sqrt(1.0 + d1(x1, x2) ** 2 + d2(x1, x2) ** 2)
        if multiplier is not None:
            a = a * multiplier(x1, x2)
        return a

    return amp


def _dyadic_integral(
    spec: SurfaceSpec,
    t: float,
    lin: tuple[float, float],
    tol: float,
    rtol: float,
    amplitude: Callable,
    max_level: int = MAX_LEVEL,
) -> OscResult:
    kappa = spec.weights
    support = spec.cutoff.support_box(kappa)
    k0, k_last, has_inner = dyadic_range(spec, support, t, lin)
    shear, sing_z = shear_for(spec)
    decay = spec.alpha + float(kappa.total)
    pieces = list(range(k0, k_last + 1))
    per_piece = tol / max(len(pieces), 1)
    singular_at_origin = spec.alpha != 0 and spec.damping.mode is not DampingMode.IDENTITY
    total, err, count = 0j, 0.0, 0
    for k in pieces:
        inner = has_inner and k == k_last
        box = _piece_box(spec, k, True, support)
        if box is None:
            continue
        factor = 2.0 ** (-k * decay)
        integrand = _make_integrand(spec, t, lin, amplitude, shear, k, True, inner)
        ubox = shear.box(box)
        sing_u = shear.singular_u()
        sz = sing_z
        if inner and singular_at_origin:
            sing_u, sz = sorted(set(sing_u) | {0.0}), sorted(set(sing_z) | {0.0})

        def target(v, factor=factor):
            return max(per_piece, rtol * abs(v) * factor) / factor

        try:
            v, e, c = _adaptive(integrand, ubox, target, sing_u, sz, max_level)
        except NumericError as exc:
            raise NumericError(
                f"dyadic piece k={k}: {exc}",
                best=total + factor * exc.best,
                error_estimate=err + factor * exc.error_estimate,
            ) from exc
        total += factor * v
        err += factor * e
        count += c
    return OscResult(total, err, count, Path.DYADIC)


# ---------------------------------------------------------------------------
# public operations


def oscillatory_integral(spec: SurfaceSpec, t: float, s=(0.0, 0.0), tol: float = 1e-9, rtol: float = 1e-7) -> OscResult:
    """J(t, s) = int a G^alpha exp(i t (f + x.s)) dx on the dyadic path.

    ``tol`` is an absolute target, ``rtol`` a relative one; the estimate is
    the 32- vs 24-point discrepancy summed over pieces.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    lin = (t * float(s[0]), t * float(s[1]))
    return _dyadic_integral(spec, float(t), lin, tol, rtol, _cutoff_amplitude(spec))


def dyadic_piece(spec: SurfaceSpec, t: float, s, k: int, rescaled: bool = True, tol: float = 1e-12) -> complex:
    """J_k(t, s) computed either on the unit annulus (rescaled) or directly in x."""
    kappa = spec.weights
    support = spec.cutoff.support_box(kappa)
    box = _piece_box(spec, k, rescaled, support)
    if box is None:
        return 0j
    lin = (t * float(s[0]), t * float(s[1]))
    shear, sing_z = shear_for(spec)
    integrand = _make_integrand(spec, float(t), lin, _cutoff_amplitude(spec), shear, k, rescaled)
    factor = 2.0 ** (-k * (spec.alpha + float(kappa.total))) if rescaled else 1.0
    v, _, _ = _adaptive(integrand, shear.box(box), lambda v: max(tol / factor, 1e-10 * abs(v)), shear.singular_u(), sing_z)
    return factor * v


def quadrature_oracle(spec: SurfaceSpec, t: float, s=(0.0, 0.0), level: int = 6, *, lin=None, amplitude=None) -> OscResult:
    """Uniform tensor Gauss-Legendre rule on the support box, 2^level panels per side.

    No dyadic splitting and no oscillation-driven sizing.  Levels level-2,
    level-1 and level are all computed; the error estimate is the last
    difference and ``converged`` is False when the differences do not shrink.
    """
    if level < 1:
        raise DomainError("oracle level must be >= 1")
    kappa = spec.weights
    lo1, hi1, lo2, hi2 = spec.cutoff.support_box(kappa)
    if lin is None:
        lin = (t * float(s[0]), t * float(s[1]))
    amp = amplitude or _cutoff_amplitude(spec)
    f = spec.phase

    def rule(lev):
        n = 2**lev
        u, wu = panel_nodes(np.linspace(lo1, hi1, n + 1), GL_HIGH)
        z, wz = panel_nodes(np.linspace(lo2, hi2, n + 1), GL_HIGH)
        acc = 0j
        step = max(1, CHUNK // u.size)
        for c in range(0, z.size, step):
            Zc, Uc = np.meshgrid(z[c : c + step], u)
            vals = amp(Uc, Zc) * spec.damping_power(Uc, Zc) * np.exp(1j * (t * f(Uc, Zc) + lin[0] * Uc + lin[1] * Zc))
            acc += complex(wu @ vals @ wz[c : c + step])
        return acc

    levels = [lv for lv in (level - 2, level - 1, level) if lv >= 0]
    vals = [rule(lv) for lv in levels]
    diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
    est = diffs[-1] if diffs else abs(vals[-1])
    converged = True
    if len(diffs) == 2 and diffs[1] > diffs[0] and diffs[1] > 1e-12 * max(1.0, abs(vals[-1])):
        converged = False
        log.warning("oracle refinement ratio does not converge: %s", diffs)
    return OscResult(vals[-1], est, (2**level) ** 2, Path.ORACLE, converged)


def fourier_surface_measure(spec: SurfaceSpec, xi, tol: float = 1e-9, rtol: float = 1e-7, *, multiplier=None) -> complex:
    """Fourier transform of G_f^alpha psi dsigma at xi in R^3.

    Equals exp(-i xi3 c) int a G^alpha exp(-i (xi1 x1 + xi2 x2 + xi3 f)) dx
    with the area element sqrt(1 + |grad f|^2) folded into a.  The phase is
    carried as t f + lin.x with t = -xi3, so xi3 = 0 needs no special
    division.
    """
    xi1, xi2, xi3 = (float(v) for v in xi)
    amp = _cutoff_amplitude(spec, multiplier, surface=True)
    res = _dyadic_integral(spec, -xi3, (-xi1, -xi2), tol, rtol, amp)
    return complex(np.exp(-1j * xi3 * spec.offset_c) * res.value)


def fourier_surface_measure_gradient(spec: SurfaceSpec, xi, tol: float = 1e-9, rtol: float = 1e-7) -> np.ndarray:
    """Gradient in xi: amplitudes multiplied by -i x1, -i x2, -i (c + f)."""
    f = spec.phase
    c = spec.offset_c
    mults = (
        lambda x1, x2: -1j * x1,
        lambda x1, x2: -1j * x2,
        lambda x1, x2: -1j * (c + f(x1, x2)),
    )
    return np.array([fourier_surface_measure(spec, xi, tol, rtol, multiplier=m) for m in mults])


class ProbeSample(NamedTuple):
    lam: float
    modulus: float
    error: float


def stationary_distance(f: MixedHomPoly, x0, sigma, search_radius: float = 4.0, starts: int = 64, seed: int = 0) -> float:
    """Distance from x0 to the nearest solution of grad f(x) + sigma = 0.

    Found by least squares from a grid of starting points in a disc around
    x0; returns ``search_radius`` when no solution is found there.
    """
    d1, d2 = f.partial(0), f.partial(1)
    s1, s2 = float(sigma[0]), float(sigma[1])

    def res(x):
        return [float(d1(x[0], x[1])) + s1, float(d2(x[0], x[1])) + s2]

    rng = np.random.default_rng(seed)
    best = search_radius
    pts = rng.uniform(-1, 1, size=(starts, 2)) * search_radius + np.asarray(x0, float)
    for p in pts:
        sol = scipy.optimize.least_squares(res, p, xtol=1e-14, ftol=1e-14, gtol=1e-14)
        if np.hypot(*sol.fun) < 1e-9:
            best = min(best, float(np.hypot(*(sol.x - np.asarray(x0, float)))))
    return best


def nonstationary_decay_probe(
    spec: SurfaceSpec,
    x0,
    sigma,
    lambdas: Sequence[float],
    separation: float = 0.1,
    tol: float = 1e-15,
    rtol: float = 1e-8,
) -> list[ProbeSample]:
    """|int a exp(i lam (f + sigma.x)) dx| for an amplitude localized near x0.

    Requires |sigma + grad f(x0)| >= separation and a cutoff centred at x0
    whose radius is at most half the distance from x0 to the set
    {grad f + sigma = 0}.
    """
    f = spec.phase
    x0 = (float(x0[0]), float(x0[1]))
    g0 = (float(f.partial(0)(*x0)) + float(sigma[0]), float(f.partial(1)(*x0)) + float(sigma[1]))
    sep = math.hypot(*g0)
    if sep < separation:
        raise DomainError(f"|sigma + grad f(x0)| = {sep:.3g} is below the separation {separation}")
    dist = stationary_distance(f, x0, sigma)
    cut = spec.cutoff
    lo1, hi1, lo2, hi2 = cut.support_box(spec.weights)
    reach = max(math.hypot(a - x0[0], b - x0[1]) for a in (lo1, hi1) for b in (lo2, hi2))
    if cut.kind.value == "radial_bump":
        reach = cut.radius + math.hypot(cut.center[0] - x0[0], cut.center[1] - x0[1])
    if reach > dist / 2:
        raise DomainError(
            f"cutoff reaches {reach:.3g} from x0 but the stationary set is at distance {dist:.3g}"
        )
    plain = spec.with_alpha(0.0)
    out = []
    for lam in lambdas:
        res = oscillatory_integral(plain, lam, sigma, tol=tol, rtol=rtol)
        out.append(ProbeSample(float(lam), abs(res.value), res.abs_error_estimate))
    return out


# ---------------------------------------------------------------------------
# batch interface


CSV_COLUMNS = ["t_or_lambda", "s1", "s2", "re", "im", "abs", "err_est", "subdivisions", "path"]


def run_batch(lines: Iterable[str], specs: dict[str, SurfaceSpec]) -> list[list]:
    """Evaluate JSON-lines requests {spec, t, s | xi, tol}; returns CSV rows."""
    rows = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        req = json.loads(line)
        spec = specs[req["spec"]]
        tol = float(req.get("tol", 1e-9))
        if "xi" in req:
            xi = [float(v) for v in req["xi"]]
            val = fourier_surface_measure(spec, xi, tol)
            t = -xi[2]
            s = (xi[0] / xi[2], xi[1] / xi[2]) if xi[2] else (float("nan"), float("nan"))
            rows.append([t, s[0], s[1], val.real, val.imag, abs(val), "", "", Path.DYADIC.value])
            continue
        t = float(req["t"])
        s = [float(v) for v in req.get("s", (0.0, 0.0))]
        res = oscillatory_integral(spec, t, s, tol)
        v = res.value
        rows.append([t, s[0], s[1], v.real, v.imag, abs(v), res.abs_error_estimate, res.subdivisions, res.path.value])
    return rows
