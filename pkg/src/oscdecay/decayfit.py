"""Log-log decay exponents of oscillatory integrals and sweeps over sigma."""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError, NumericError
from .homfn import height
from .oscquad import SurfaceSpec, nonstationary_decay_probe, oscillatory_integral

log = logging.getLogger(__name__)

UNRELIABLE_RMS = 0.15
NOISE_FACTOR = 10.0
MIN_TAIL_SAMPLES = 4
EPS = float(np.finfo(float).eps)


def geometric_grid(lo_exp: float = 4, hi_exp: float = 14, points: int = 21) -> np.ndarray:
    """2^e for e evenly spaced in [lo_exp, hi_exp]."""
    return 2.0 ** np.linspace(lo_exp, hi_exp, points)


@dataclass(frozen=True)
class Sample:
    t: float
    modulus: float
    error: float


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    residual_rms: float
    grid: tuple[Sample, ...]
    tail_fraction: float
    used: int
    slope_stderr: float = 0.0

    @property
    def reliable(self) -> bool:
        return self.residual_rms <= UNRELIABLE_RMS

    def to_json(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual_rms": self.residual_rms,
            "slope_stderr": self.slope_stderr,
            "n_samples": self.used,
            "tail_fraction": self.tail_fraction,
            "reliable": self.reliable,
        }


def fit_samples(samples: Sequence[Sample], tail_fraction: float = 0.5) -> DecayFit:
    """Least-squares slope of log|J| against log t over the upper part of the range.

    The tail is the set of samples with log t in the top ``tail_fraction``
    of the sampled log-range.  Samples whose modulus is below ten times their
    error estimate are dropped.
    """
    if not 0 < tail_fraction <= 1:
        raise DomainError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    samples = tuple(sorted(samples, key=lambda s: s.t))
    logs = np.log([s.t for s in samples])
    cut = logs[-1] - tail_fraction * (logs[-1] - logs[0]) - 1e-12
    tail = [s for s, lt in zip(samples, logs) if lt >= cut]
    usable = [s for s in tail if s.modulus > NOISE_FACTOR * s.error and s.modulus > 0]
    if len(usable) < MIN_TAIL_SAMPLES:
        raise InsufficientDataError(
            f"{len(usable)} usable tail samples out of {len(tail)}, need {MIN_TAIL_SAMPLES}"
        )
    x = np.log([s.t for s in usable])
    y = np.log([s.modulus for s in usable])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    dof = len(x) - 2
    sxx = float(np.sum((x - x.mean()) ** 2))
    stderr = float(np.sqrt(np.sum(resid**2) / dof / sxx)) if dof > 0 and sxx > 0 else 0.0
    fit = DecayFit(float(slope), float(intercept), rms, samples, tail_fraction, len(usable), stderr)
    if not fit.reliable:
        log.warning("decay fit residual rms %.3f exceeds %.2f", rms, UNRELIABLE_RMS)
    return fit


def phase_scale(spec: SurfaceSpec, s) -> float:
    """max |f(x) + s.x| over the cutoff support box (sampled)."""
    lo1, hi1, lo2, hi2 = spec.cutoff.support_box(spec.weights)
    X1, X2 = np.meshgrid(np.linspace(lo1, hi1, 65), np.linspace(lo2, hi2, 65))
    return float(np.max(np.abs(spec.phase(X1, X2) + float(s[0]) * X1 + float(s[1]) * X2)))


def rounding_floor(t: float, scale: float, mass: float) -> float:
    """Size of the rounding noise in a quadrature sum of mass ``mass`` whose phases reach |t| scale.

    Each phase t (f + s.x) carries a relative error of order eps, i.e. an
    absolute phase error eps |t| scale.
    """
    return EPS * (1.0 + abs(t) * scale) * mass


def sample_decay(
    spec: SurfaceSpec,
    s,
    t_grid: Sequence[float],
    tol: float | None = None,
    rtol: float = 1e-6,
) -> list[Sample]:
    """|J(t, s)| with its error estimate at every t.

    The default absolute tolerance is 1e-10 |J(0, s)|, i.e. relative to the
    total mass of the damped amplitude.  Error estimates never go below the
    rounding floor, so samples lost in rounding noise are dropped by the fit.
    """
    mass = abs(oscillatory_integral(spec, 0.0, s).value)
    if tol is None:
        tol = 1e-10 * max(mass, 1e-300)
    scale = phase_scale(spec, s)
    out = []
    for t in t_grid:
        floor = rounding_floor(t, scale, mass)
        try:
            res = oscillatory_integral(spec, float(t), s, tol=tol, rtol=rtol)
            out.append(Sample(float(t), abs(res.value), max(res.abs_error_estimate, floor)))
        except NumericError as exc:
            log.warning("t=%g: %s", t, exc)
            out.append(Sample(float(t), abs(exc.best or 0.0), float(exc.error_estimate or math.inf)))
    return out


def probe_samples(spec: SurfaceSpec, x0, sigma, lambdas: Sequence[float], **kw) -> list[Sample]:
    """Non-stationary probe values as fit samples, with the rounding floor applied."""
    plain = spec.with_alpha(0.0)
    mass = abs(oscillatory_integral(plain, 0.0, sigma).value)
    scale = phase_scale(plain, sigma)
    return [
        Sample(p.lam, p.modulus, max(p.error, rounding_floor(p.lam, scale, mass)))
        for p in nonstationary_decay_probe(spec, x0, sigma, lambdas, **kw)
    ]


def _check_grid(t_grid: Sequence[float]) -> None:
    t = np.asarray(t_grid, dtype=float)
    if t.size < 8 or np.any(t <= 0):
        raise DomainError("t_grid needs at least 8 positive points")
    if np.log10(t.max() / t.min()) < 3 - 1e-9:
        raise DomainError("t_grid must span at least three decades")


def fit_decay_exponent(
    spec: SurfaceSpec,
    s=(0.0, 0.0),
    t_grid: Sequence[float] | None = None,
    tail_fraction: float = 0.5,
    tol: float | None = None,
    rtol: float = 1e-6,
) -> DecayFit:
    """Sample |J(t, s)| on ``t_grid`` (default 2^4..2^14, 21 points) and fit the tail."""
    t_grid = geometric_grid() if t_grid is None else t_grid
    _check_grid(t_grid)
    return fit_samples(sample_decay(spec, s, t_grid, tol, rtol), tail_fraction)


@dataclass(frozen=True)
class SigmaOutcome:
    sigma: tuple[float, float]
    fit: DecayFit | None
    failure: str | None = None

    @property
    def slope(self) -> float | None:
        return None if self.fit is None else self.fit.slope


@dataclass(frozen=True)
class SweepReport:
    worst_slope: float
    worst_sigma: tuple[float, float]
    per_sigma: tuple[SigmaOutcome, ...]
    threshold: float
    slack: float
    pass_: bool
    alpha_threshold: float | None = None
    alpha_inside: bool | None = None

    def to_json(self) -> dict:
        return {
            "worst_slope": self.worst_slope,
            "worst_sigma": list(self.worst_sigma),
            "threshold": self.threshold,
            "slack": self.slack,
            "pass": self.pass_,
            "alpha_threshold": self.alpha_threshold,
            "alpha_inside_hypothesis": self.alpha_inside,
        }

    def to_csv(self, extra: dict | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        cols = ["sigma1", "sigma2", "slope", "residual_rms", "n_samples", "pass"]
        extra = extra or {}
        w.writerow(cols + list(extra))
        limit = self.threshold + self.slack
        for o in self.per_sigma:
            if o.fit is None:
                row = [o.sigma[0], o.sigma[1], "", "", 0, o.failure]
            else:
                row = [o.sigma[0], o.sigma[1], o.fit.slope, o.fit.residual_rms, o.fit.used, o.fit.slope <= limit]
            w.writerow(row + list(extra.values()))
        return buf.getvalue()


def height_threshold(spec: SurfaceSpec) -> Fraction:
    """1/2 - 1/h for the phase of ``spec``."""
    return Fraction(1, 2) - 1 / height(spec.phase)


def uniform_decay_sweep(
    spec: SurfaceSpec,
    sigma_grid: Sequence,
    t_grid: Sequence[float] | None = None,
    threshold: float = -0.5,
    slack: float = 0.05,
    tail_fraction: float = 0.5,
    sampler: Callable | None = None,
) -> SweepReport:
    """Fit the decay exponent at every sigma and compare the worst one to the threshold.

    A sigma whose tail falls below the quadrature noise floor decays faster
    than the sampled range can resolve; it is recorded with its failure
    reason and does not enter the worst slope.  The sweep fails if no sigma
    yields a fit.
    """
    sigma_grid = [(float(a), float(b)) for a, b in sigma_grid]
    if not sigma_grid:
        raise DomainError("sigma_grid is empty")
    t_grid = geometric_grid() if t_grid is None else t_grid
    _check_grid(t_grid)
    sampler = sampler or (lambda sig: sample_decay(spec, sig, t_grid))
    try:
        thr = height_threshold(spec)
        inside = spec.alpha > thr
        if not inside:
            log.warning("alpha=%g is not above 1/2 - 1/h = %s", spec.alpha, thr)
        thr = float(thr)
    except DomainError:
        thr, inside = None, None
    outcomes = []
    for sig in sigma_grid:
        try:
            fit = fit_samples(sampler(sig), tail_fraction)
            outcomes.append(SigmaOutcome(sig, fit))
        except (InsufficientDataError, NumericError) as exc:
            outcomes.append(SigmaOutcome(sig, None, f"{type(exc).__name__}: {exc}"))
    fitted = [o for o in outcomes if o.fit is not None]
    if fitted:
        worst = max(fitted, key=lambda o: o.fit.slope)
        worst_slope, worst_sigma = worst.fit.slope, worst.sigma
    else:
        worst_slope, worst_sigma = math.nan, sigma_grid[0]
    ok = bool(fitted) and worst_slope <= threshold + slack
    return SweepReport(worst_slope, worst_sigma, tuple(outcomes), threshold, slack, ok, thr, inside)


def sigma_square(center=(0.0, 0.0), half_width: float = 0.5, points: int = 5) -> list[tuple[float, float]]:
    """points x points grid on the square of the given half width around center."""
    ax = np.linspace(-half_width, half_width, points)
    return [(center[0] + a, center[1] + b) for a in ax for b in ax]
