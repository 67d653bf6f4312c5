"""Quadratic classical spin Hamiltonian and its Euler-top reduction.

``H = (alpha/2) Sx^2 + beta Sx Sy + (gamma/2) Sy^2`` on the unit sphere.  A
rotation about ``Sz`` by ``theta`` brings it to ``Mx^2/(2 Ix) + My^2/(2 Iy)``;
the sign of ``alpha*gamma - beta^2`` decides whether both inertias are
positive (elliptic cylinders) or one is negative (inverted top, hyperbolic
cylinders).

Frame convention: ``theta = atan2(2 beta, alpha - gamma) / 2`` is the angle of
the ``Mx`` principal axis measured from ``Sx`` towards ``Sy``, so
``Mx = cos(theta) Sx + sin(theta) Sy`` and ``My = -sin(theta) Sx + cos(theta) Sy``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

DEGENERACY_TOL = 1e-14


class SpinVector(NamedTuple):
    sx: float
    sy: float
    sz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz])


class Regime(enum.Enum):
    Elliptic = "Elliptic"
    Hyperbolic = "Hyperbolic"
    Degenerate = "Degenerate"


class DegenerateRegimeError(ValueError):
    """Raised when a formula needs a non-degenerate top but ``alpha*gamma == beta^2``."""


@dataclass(frozen=True)
class QuadraticSpinHamiltonian:
    """Coefficients of the quadratic spin Hamiltonian.

    ``field`` adds a linear term ``field . S``.  It is honoured by the equations
    of motion and the numerical integrator only; the principal-axis analysis
    requires it to vanish.
    """

    alpha: float
    beta: float
    gamma: float
    field: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if len(self.field) != 3 or not all(math.isfinite(f) for f in self.field):
            raise ValueError("field must be three finite numbers")
        object.__setattr__(self, "field", tuple(float(f) for f in self.field))

    @property
    def discriminant(self) -> float:
        return self.alpha * self.gamma - self.beta * self.beta

    @property
    def has_field(self) -> bool:
        return any(f != 0.0 for f in self.field)

    def to_dict(self) -> dict:
        d = {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}
        if self.has_field:
            d["field"] = list(self.field)
        return d


@dataclass(frozen=True)
class TopParameters:
    """Principal-axis data of a quadratic spin Hamiltonian.

    For the elliptic regime ``Ix <= Iy`` are the two positive inertias; for the
    hyperbolic regime ``Jx = Ix`` and ``Jy = -Iy`` are both positive.
    ``orientation`` is ``-1`` when the form is negative definite: the stored
    inertias then describe ``-H`` and energies/time run backwards.
    """

    theta: float
    regime: Regime
    Ix: float
    Iy: float
    orientation: int = 1
    source: QuadraticSpinHamiltonian | None = None

    @property
    def Jx(self) -> float:
        self._require(Regime.Hyperbolic)
        return self.Ix

    @property
    def Jy(self) -> float:
        self._require(Regime.Hyperbolic)
        return -self.Iy

    @property
    def rate(self) -> float:
        """``omega = sqrt(alpha gamma - beta^2)`` or ``Omega = sqrt(beta^2 - alpha gamma)``."""
        self._require_nondegenerate()
        return 1.0 / math.sqrt(abs(self.Ix * self.Iy))

    def _require(self, regime):
        if self.regime is not regime:
            raise ValueError(f"quantity only defined in the {regime.value} regime (have {self.regime.value})")

    def _require_nondegenerate(self):
        if self.regime is Regime.Degenerate:
            raise DegenerateRegimeError("alpha*gamma == beta^2: one principal inertia is infinite")

    def to_principal(self, s) -> np.ndarray:
        """Rotate spin vector(s) ``(..., 3)`` into the principal frame."""
        s = np.asarray(s, dtype=float)
        c, sn = math.cos(self.theta), math.sin(self.theta)
        out = np.empty_like(s)
        out[..., 0] = c * s[..., 0] + sn * s[..., 1]
        out[..., 1] = -sn * s[..., 0] + c * s[..., 1]
        out[..., 2] = s[..., 2]
        return out

    def from_principal(self, m) -> np.ndarray:
        m = np.asarray(m, dtype=float)
        c, sn = math.cos(self.theta), math.sin(self.theta)
        out = np.empty_like(m)
        out[..., 0] = c * m[..., 0] - sn * m[..., 1]
        out[..., 1] = sn * m[..., 0] + c * m[..., 1]
        out[..., 2] = m[..., 2]
        return out

    def to_dict(self) -> dict:
        d = {"regime": self.regime.value, "theta": self.theta, "orientation": self.orientation}
        if self.regime is Regime.Elliptic:
            d.update(Ix=self.Ix, Iy=self.Iy, omega=self.rate)
        elif self.regime is Regime.Hyperbolic:
            d.update(Jx=self.Jx, Jy=self.Jy, Omega=self.rate)
        return d


def classify_regime(alpha: float, beta: float, gamma: float) -> Regime:
    det = alpha * gamma - beta * beta
    scale = max(abs(alpha * gamma), beta * beta)
    if scale == 0.0 or abs(det) <= DEGENERACY_TOL * scale:
        return Regime.Degenerate
    return Regime.Elliptic if det > 0 else Regime.Hyperbolic


def _inverse_inertias(alpha, beta, gamma):
    root = math.hypot(alpha - gamma, 2.0 * beta)
    return 0.5 * (alpha + gamma + root), 0.5 * (alpha + gamma - root)


def reduce_to_principal_axes(h: QuadraticSpinHamiltonian) -> TopParameters:
    """Principal inertias, rotation angle and regime of ``h``.

    The degenerate regime is reported (with infinite ``Iy``), not raised.
    """
    alpha, beta, gamma = h.alpha, h.beta, h.gamma
    regime = classify_regime(alpha, beta, gamma)
    orientation = 1
    if regime is Regime.Elliptic and alpha + gamma < 0:
        # negative definite: analyse -H, whose trajectories are time reversed
        alpha, beta, gamma = -alpha, -beta, -gamma
        orientation = -1
    theta = 0.5 * math.atan2(2.0 * beta, alpha - gamma)
    inv_x, inv_y = _inverse_inertias(alpha, beta, gamma)
    if regime is Regime.Degenerate:
        # one eigenvalue vanishes; keep the finite one as 1/Ix when possible
        big = inv_x if abs(inv_x) >= abs(inv_y) else inv_y
        Ix = 1.0 / big if big != 0.0 else math.inf
        return TopParameters(theta, regime, Ix, math.inf, 1, h)
    if regime is Regime.Elliptic:
        # product form avoids cancellation in the smaller eigenvalue
        inv_y = (alpha * gamma - beta * beta) / inv_x
    else:
        inv_y = (alpha * gamma - beta * beta) / inv_x
    return TopParameters(theta, regime, 1.0 / inv_x, 1.0 / inv_y, orientation, h)


@dataclass(frozen=True)
class EnergyBounds:
    H_min: float
    H_sep: float
    H_max: float

    def contains(self, H: float, *, strict: bool = True) -> bool:
        if strict:
            return self.H_min < H < self.H_max
        return self.H_min <= H <= self.H_max

    def to_dict(self) -> dict:
        return {"H_min": self.H_min, "H_sep": self.H_sep, "H_max": self.H_max}


def energy_bounds(p: TopParameters) -> EnergyBounds:
    """Energy range with orbits on the sphere, plus the separatrix energy."""
    p._require_nondegenerate()
    if p.regime is Regime.Elliptic:
        lo, sep, hi = 0.0, 1.0 / (2.0 * p.Iy), 1.0 / (2.0 * p.Ix)
        if p.orientation < 0:
            lo, sep, hi = -hi, -sep, -lo
        return EnergyBounds(lo, sep, hi)
    return EnergyBounds(-1.0 / (2.0 * p.Jy), 0.0, 1.0 / (2.0 * p.Jx))


@dataclass(frozen=True)
class FixedPoint:
    axis: str
    location: SpinVector
    energy: float
    stability: str

    def to_dict(self) -> dict:
        return {
            "axis": self.axis,
            "location": list(self.location),
            "energy": self.energy,
            "stability": self.stability,
        }


def fixed_points(p: TopParameters) -> tuple[FixedPoint, ...]:
    """The six equilibria ``+-Mx, +-My, +-Mz`` with energies and linear stability."""
    p._require_nondegenerate()
    if p.regime is Regime.Elliptic:
        sign = p.orientation
        table = {
            "Mx": (sign / (2.0 * p.Ix), "center"),
            "My": (sign / (2.0 * p.Iy), "saddle"),
            "Mz": (0.0, "center"),
        }
    else:
        table = {
            "Mx": (1.0 / (2.0 * p.Jx), "center"),
            "My": (-1.0 / (2.0 * p.Jy), "center"),
            "Mz": (0.0, "saddle"),
        }
    out = []
    for i, name in enumerate(("Mx", "My", "Mz")):
        energy, stability = table[name]
        for sign, tag in ((1.0, "+"), (-1.0, "-")):
            m = np.zeros(3)
            m[i] = sign
            loc = SpinVector(*map(float, p.from_principal(m)))
            out.append(FixedPoint(tag + name, loc, energy, stability))
    return tuple(out)


def hamiltonian_eval(h: QuadraticSpinHamiltonian, s):
    """``(alpha/2) Sx^2 + beta Sx Sy + (gamma/2) Sy^2 (+ field . S)`` for vector(s) ``(..., 3)``."""
    s = np.asarray(s, dtype=float)
    sx, sy = s[..., 0], s[..., 1]
    val = 0.5 * h.alpha * sx * sx + h.beta * sx * sy + 0.5 * h.gamma * sy * sy
    if h.has_field:
        val = val + h.field[0] * sx + h.field[1] * sy + h.field[2] * s[..., 2]
    return float(val) if np.ndim(val) == 0 else val


def principal_energy(p: TopParameters, m):
    """Energy from principal-frame components ``Mx^2/(2 Ix) + My^2/(2 Iy)``."""
    m = np.asarray(m, dtype=float)
    val = m[..., 0] ** 2 / (2.0 * p.Ix) + m[..., 1] ** 2 / (2.0 * p.Iy)
    val = p.orientation * val
    return float(val) if np.ndim(val) == 0 else val
