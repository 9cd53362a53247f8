"""Compactly supported smooth cutoffs and the anisotropic dyadic partition."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .homfn import Weights, polar_radius


def bump(u):
    """exp(1 - 1/(1 - u^2)) on |u| < 1, zero outside; peak value 1 at u = 0."""
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape)
    inside = np.abs(u) < 1
    ui = u[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ui * ui))
    return out


def smooth_step(v):
    """C-infinity step: 0 for v <= 0, 1 for v >= 1."""
    v = np.asarray(v, dtype=float)
    out = np.where(v >= 1, 1.0, 0.0)
    mid = (v > 0) & (v < 1)
    vm = v[mid]
    a = np.exp(-1.0 / vm)
    b = np.exp(-1.0 / (1.0 - vm))
    out[mid] = a / (a + b)
    return out


def annular_piece(v):
    """Dyadic piece in the variable v = log2 r, supported on [0, 2].

    Integer shifts telescope: sum over k >= k0 of annular_piece(v + k) equals
    1 - smooth_step(v + k0 - 1), which is 1 for v <= 1 - k0.
    """
    v = np.asarray(v, dtype=float)
    return smooth_step(v) - smooth_step(v - 1.0)


def partition_sum(x1, x2, kappa: Weights, k_range) -> np.ndarray:
    """sum_k annular_piece(log2 r(delta_{2^k} x)) over ``k_range``."""
    r = polar_radius(x1, x2, kappa)
    with np.errstate(divide="ignore"):
        v = np.log2(r)
    total = np.zeros(np.shape(v))
    for k in k_range:
        total = total + annular_piece(v + k)
    return total


class CutoffKind(str, enum.Enum):
    RADIAL = "radial_bump"
    ANNULAR = "annular_bump"
    PRODUCT = "product_bump"


@dataclass(frozen=True)
class CutoffSpec:
    """Amplitude profile built from the bump exp(1 - 1/(1 - u^2)).

    radial_bump: scale * bump(|x - center| / radius).
    product_bump: scale * prod_j bump((x_j - center_j) / radius).
    annular_bump: scale * annular_piece(log2(r(x) / radius)), the dyadic piece
    supported on radius <= r(x) <= 4 radius (center is ignored).
    """

    kind: CutoffKind = CutoffKind.RADIAL
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", CutoffKind(self.kind))
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))
        if not self.radius > 0:
            raise DomainError(f"cutoff radius must be positive, got {self.radius}")

    def __call__(self, x1, x2, kappa: Weights):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        c1, c2 = self.center
        if self.kind is CutoffKind.RADIAL:
            return self.scale * bump(np.hypot(x1 - c1, x2 - c2) / self.radius)
        if self.kind is CutoffKind.PRODUCT:
            return self.scale * bump((x1 - c1) / self.radius) * bump((x2 - c2) / self.radius)
        r = polar_radius(x1, x2, kappa)
        with np.errstate(divide="ignore"):
            v = np.log2(r / self.radius)
        return self.scale * annular_piece(v)

    def support_box(self, kappa: Weights) -> tuple[float, float, float, float]:
        """(lo1, hi1, lo2, hi2) containing the support."""
        if self.kind is CutoffKind.ANNULAR:
            k1, k2 = kappa.as_floats()
            a1 = (4 * self.radius) ** k1
            a2 = (4 * self.radius) ** k2
            return (-a1, a1, -a2, a2)
        c1, c2 = self.center
        r = self.radius
        return (c1 - r, c1 + r, c2 - r, c2 + r)

    def contains_origin(self, kappa: Weights) -> bool:
        lo1, hi1, lo2, hi2 = self.support_box(kappa)
        return lo1 <= 0 <= hi1 and lo2 <= 0 <= hi2

    def sup(self) -> float:
        return abs(self.scale)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "center": list(self.center), "radius": self.radius, "scale": self.scale}

    @classmethod
    def from_json(cls, obj) -> "CutoffSpec":
        return cls(
            kind=obj.get("kind", "radial_bump"),
            center=tuple(obj.get("center", (0.0, 0.0))),
            radius=float(obj.get("radius", 1.0)),
            scale=float(obj.get("scale", 1.0)),
        )
