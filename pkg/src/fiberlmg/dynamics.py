"""Spin trajectories on the unit sphere: exact elliptic-function orbits and an RK4 integrator.

Equations of motion are ``dS/dt = grad(H) x S``.  In the principal frame of an
elliptic top this reads ``dMx/dt = My Mz / Iy``, ``dMy/dt = -Mx Mz / Ix``,
``dMz/dt = (1/Ix - 1/Iy) Mx My``.

Every closed-form orbit is written as ``M(u)`` with elliptic argument
``u = phase + rate * t``.  ``phase`` defaults to zero, which puts the orbit at
its reference point (for example ``My = 0`` on the low elliptic branch); the
phase that passes through an arbitrary point comes from :func:`phase_align`.

Mirror orbits are picked with ``orbit = (s1, s2)``, a pair of signs:

* elliptic regime: ``(sign Mx, sign Mz)``.  Low-energy orbits circle ``+-Mz``
  and only read ``s2``; high-energy orbits circle ``+-Mx`` and only read ``s1``.
* hyperbolic regime: ``(sign Mx, sign My)``.  Positive-energy orbits circle
  ``+-Mx`` and read ``s1``; negative-energy orbits circle ``+-My`` and read ``s2``.

Separatrix and heteroclinic arcs use both signs.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numba
import numpy as np

from .elliptic import (
    EllipticModulus,
    complete_elliptic_K,
    elliptic_f,
    jacobi_amplitude_inverse,
    jacobi_sn_cn_dn,
)
from .hamiltonian import (
    DegenerateRegimeError,
    QuadraticSpinHamiltonian,
    Regime,
    TopParameters,
    energy_bounds,
    hamiltonian_eval,
)

SEPARATRIX_TOL = 1e-12
BOUNDS_TOL = 1e-12

HETEROCLINIC_SELECTORS = {"l1": (1, 1), "l2": (-1, 1), "l3": (-1, -1), "l4": (1, -1)}


class Branch(enum.Enum):
    EllipticLow = "EllipticLow"
    EllipticHigh = "EllipticHigh"
    Separatrix = "Separatrix"
    HyperbolicPos = "HyperbolicPos"
    HyperbolicNeg = "HyperbolicNeg"
    Heteroclinic = "Heteroclinic"


class EnergyOutOfBoundsError(ValueError):
    """Energy outside the interval where the level set meets the sphere."""


class InfinitePeriodError(ValueError):
    """Raised for separatrix and heteroclinic energies."""


class DriftError(RuntimeError):
    """Integrator drift in ``|S|^2`` or ``H`` exceeded the caller's tolerance."""


@dataclass(frozen=True)
class EllipticTrajectoryParams:
    """Everything needed to evaluate one orbit family in closed form.

    ``energy`` is the energy of the positive-definite form actually solved; for
    a negative-definite Hamiltonian it is ``-H`` and time runs backwards
    (``orientation = -1``).  ``amplitudes`` are the coefficients multiplying the
    elliptic functions in ``(Mx, My, Mz)``.
    """

    branch: Branch
    modulus: EllipticModulus
    rate: float
    amplitude_param: float
    theta_frame: float
    amplitudes: tuple[float, float, float]
    energy: float
    orientation: int = 1

    @property
    def period(self) -> float:
        if self.branch in (Branch.Separatrix, Branch.Heteroclinic):
            raise InfinitePeriodError("separatrix orbits have infinite period")
        if self.rate == 0.0:
            raise InfinitePeriodError("the orbit is a fixed point (zero rate)")
        return 4.0 * complete_elliptic_K(self.modulus.k) / self.rate

    def to_dict(self) -> dict:
        return {
            "branch": self.branch.value,
            "k": self.modulus.k,
            "kprime": self.modulus.kprime,
            "rate": self.rate,
            "amplitude_param": self.amplitude_param,
            "theta": self.theta_frame,
            "orientation": self.orientation,
        }


# ---------------------------------------------------------------------------
# equations of motion and numerical integration


def _grad(h: QuadraticSpinHamiltonian, s):
    sx, sy = s[..., 0], s[..., 1]
    gx = h.alpha * sx + h.beta * sy + h.field[0]
    gy = h.beta * sx + h.gamma * sy + h.field[1]
    gz = np.full_like(sx, h.field[2])
    return gx, gy, gz


def eom_rhs(h: QuadraticSpinHamiltonian, s):
    """Time derivative ``grad(H) x S`` for spin vector(s) of shape ``(..., 3)``."""
    s = np.asarray(s, dtype=float)
    gx, gy, gz = _grad(h, s)
    sx, sy, sz = s[..., 0], s[..., 1], s[..., 2]
    return np.stack([gy * sz - gz * sy, gz * sx - gx * sz, gx * sy - gy * sx], axis=-1)


@numba.njit(cache=True)
def _rhs_kernel(a, b, g, hx, hy, hz, x, y, z):
    gx = a * x + b * y + hx
    gy = b * x + g * y + hy
    return gy * z - hz * y, hz * x - gx * z, gx * y - gy * x


@numba.njit(cache=True)
def _rk4_kernel(alpha, beta, gamma, field, s0, dt, n_steps, sample_every, renormalize):
    m = s0.shape[0]
    n_samples = n_steps // sample_every + 1
    out = np.empty((n_samples, m, 3))
    half = 0.5 * dt
    for j in range(m):
        a, b, g = alpha[j], beta[j], gamma[j]
        hx, hy, hz = field[j, 0], field[j, 1], field[j, 2]
        x, y, z = s0[j, 0], s0[j, 1], s0[j, 2]
        out[0, j, 0] = x
        out[0, j, 1] = y
        out[0, j, 2] = z
        k = 1
        for step in range(1, n_steps + 1):
            k1x, k1y, k1z = _rhs_kernel(a, b, g, hx, hy, hz, x, y, z)
            k2x, k2y, k2z = _rhs_kernel(a, b, g, hx, hy, hz, x + half * k1x, y + half * k1y, z + half * k1z)
            k3x, k3y, k3z = _rhs_kernel(a, b, g, hx, hy, hz, x + half * k2x, y + half * k2y, z + half * k2z)
            k4x, k4y, k4z = _rhs_kernel(a, b, g, hx, hy, hz, x + dt * k3x, y + dt * k3y, z + dt * k3z)
            x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
            y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
            if renormalize:
                nrm = math.sqrt(x * x + y * y + z * z)
                x /= nrm
                y /= nrm
                z /= nrm
            if step % sample_every == 0:
                out[k, j, 0] = x
                out[k, j, 1] = y
                out[k, j, 2] = z
                k += 1
    return out


def integrate_batch(hamiltonians, s0, dt: float, n_steps: int, *, sample_every: int = 1, renormalize: bool = False):
    """RK4-integrate many independent spins; returns samples of shape ``(n_samples, m, 3)``.

    ``hamiltonians`` is a sequence of :class:`QuadraticSpinHamiltonian` (one per
    row of ``s0``) or a single one shared by all rows.
    """
    s0 = np.atleast_2d(np.asarray(s0, dtype=float))
    m = s0.shape[0]
    if isinstance(hamiltonians, QuadraticSpinHamiltonian):
        hamiltonians = [hamiltonians] * m
    if len(hamiltonians) != m:
        raise ValueError("need one Hamiltonian per initial state")
    if not dt > 0 or n_steps < 0 or sample_every < 1:
        raise ValueError("dt must be positive, n_steps >= 0 and sample_every >= 1")
    alpha = np.array([h.alpha for h in hamiltonians], dtype=float)
    beta = np.array([h.beta for h in hamiltonians], dtype=float)
    gamma = np.array([h.gamma for h in hamiltonians], dtype=float)
    field = np.array([h.field for h in hamiltonians], dtype=float).reshape(m, 3)
    return _rk4_kernel(alpha, beta, gamma, field, np.ascontiguousarray(s0), float(dt), int(n_steps), int(sample_every), bool(renormalize))


@dataclass(frozen=True)
class NumericTrajectory:
    t: np.ndarray
    s: np.ndarray
    energy: np.ndarray
    max_norm_drift: float
    max_energy_drift: float

    def __iter__(self):
        return iter(zip(self.t, self.s))


def numeric_trajectory(
    h: QuadraticSpinHamiltonian,
    s0,
    t_end: float,
    dt: float,
    *,
    sample_every: int = 1,
    renormalize: bool = False,
    tolerance: float | None = None,
) -> NumericTrajectory:
    """Fixed-step RK4 trajectory from ``s0`` over ``[0, t_end]``.

    The last step is shortened by rounding the step count, so ``t_end`` is hit
    to within ``dt/2``.  Drift of ``|S|^2`` and ``H`` is measured on the
    returned samples; ``tolerance`` turns excessive drift into ``DriftError``.
    """
    s0 = np.asarray(s0, dtype=float)
    if s0.shape != (3,):
        raise ValueError("s0 must be a single 3-vector")
    if abs(float(s0 @ s0) - 1.0) > 1e-12:
        raise ValueError("initial state must lie on the unit sphere (|s0| = 1 within 1e-12)")
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not t_end >= 0:
        raise ValueError("t_end must be non-negative")
    n_steps = int(round(t_end / dt))
    out = integrate_batch([h], s0[None, :], dt, n_steps, sample_every=sample_every, renormalize=renormalize)[:, 0, :]
    t = np.arange(out.shape[0]) * (dt * sample_every)
    norm_drift = float(np.max(np.abs(np.einsum("ij,ij->i", out, out) - 1.0)))
    energy = hamiltonian_eval(h, out)
    energy_drift = float(np.max(np.abs(energy - energy[0])))
    if tolerance is not None and max(norm_drift, energy_drift) > tolerance:
        raise DriftError(
            f"drift |S|^2 {norm_drift:.3e}, H {energy_drift:.3e} exceeds tolerance {tolerance:.3e}; reduce dt"
        )
    return NumericTrajectory(t, out, energy, norm_drift, energy_drift)


# ---------------------------------------------------------------------------
# closed-form orbits


def _positive_energy(p: TopParameters, H: float) -> float:
    """Energy of the positive-definite form, after checking bounds and snapping round-off."""
    if p.regime is Regime.Degenerate:
        raise DegenerateRegimeError("trajectory formulas need a non-degenerate top (alpha*gamma != beta^2)")
    if not math.isfinite(H):
        raise ValueError("energy must be finite")
    b = energy_bounds(p)
    slack = BOUNDS_TOL * max(abs(b.H_min), abs(b.H_max))
    if H < b.H_min - slack or H > b.H_max + slack:
        raise EnergyOutOfBoundsError(f"H={H!r} outside [{b.H_min!r}, {b.H_max!r}]")
    H = min(max(H, b.H_min), b.H_max)
    return p.orientation * H


def _ratio(num, den):
    if den <= 0.0:
        return 0.0
    return min(max(num / den, 0.0), 1.0)


def _amplitude_from_cn(value, k):
    # smallest u >= 0 with cn(u, k) = value
    value = min(max(value, -1.0), 1.0)
    return float(elliptic_f(math.acos(value), k))


def _amplitude_from_dn(value, k):
    # smallest u >= 0 with dn(u, k) = value; dn^2 = 1 - k^2 sn^2
    if k == 0.0:
        return 0.0
    sn = math.sqrt(max(1.0 - value * value, 0.0)) / k
    return float(elliptic_f(math.asin(min(sn, 1.0)), k))


def trajectory_params(p: TopParameters, H: float) -> EllipticTrajectoryParams:
    """Branch, modulus, rate and amplitudes of the orbit family with energy ``H``."""
    E = _positive_energy(p, H)
    rate0 = p.rate
    if p.regime is Regime.Elliptic:
        Ix, Iy = p.Ix, p.Iy
        symmetric = (Iy - Ix) <= 1e-15 * Iy
        ax = math.sqrt(max(2.0 * E * Ix, 0.0))
        az = math.sqrt(max(1.0 - 2.0 * E * Ix, 0.0))
        gap = 2.0 * E * Iy - 1.0
        if not symmetric and abs(gap) <= SEPARATRIX_TOL:
            amps = (math.sqrt(Ix / Iy), 1.0, math.sqrt(max(1.0 - Ix / Iy, 0.0)))
            return EllipticTrajectoryParams(
                Branch.Separatrix, EllipticModulus(1.0, 0.0), rate0 * amps[2], math.nan, p.theta, amps, E, p.orientation
            )
        if symmetric or gap < 0:
            k2 = 0.0 if symmetric else _ratio(2.0 * E * (Iy - Ix), 1.0 - 2.0 * E * Ix)
            mod = EllipticModulus.from_k(math.sqrt(k2))
            amps = (ax, math.sqrt(max(2.0 * E * Iy, 0.0)), az)
            a = _amplitude_from_cn(ax, mod.kprime) if mod.kprime > 0 else 0.0
            return EllipticTrajectoryParams(Branch.EllipticLow, mod, rate0 * az, a, p.theta, amps, E, p.orientation)
        k2 = _ratio(1.0 - 2.0 * E * Ix, 2.0 * E * (Iy - Ix))
        mod = EllipticModulus.from_k(math.sqrt(k2))
        amps = (ax, math.sqrt(max(Iy * (1.0 - 2.0 * E * Ix) / (Iy - Ix), 0.0)), az)
        rate = rate0 * math.sqrt(2.0 * E * (Iy - Ix))
        return EllipticTrajectoryParams(Branch.EllipticHigh, mod, rate, math.nan, p.theta, amps, E, p.orientation)

    Jx, Jy = p.Jx, p.Jy
    s = Jx + Jy
    plus = max(1.0 + 2.0 * E * Jy, 0.0)
    minus = max(1.0 - 2.0 * E * Jx, 0.0)
    amps_xy = (math.sqrt(Jx * plus / s), math.sqrt(Jy * minus / s))
    if abs(E) * 2.0 * max(Jx, Jy) <= SEPARATRIX_TOL:
        vt = math.asin(math.sqrt(Jx / s))
        amps = (math.sin(vt), math.cos(vt), 1.0)
        return EllipticTrajectoryParams(Branch.Heteroclinic, EllipticModulus(1.0, 0.0), rate0, vt, p.theta, amps, 0.0)
    if E > 0:
        mod = EllipticModulus.from_k(math.sqrt(_ratio(minus, plus)))
        amps = (*amps_xy, math.sqrt(minus))
        vt = _amplitude_from_dn(math.sqrt(minus), mod.kprime)
        return EllipticTrajectoryParams(Branch.HyperbolicPos, mod, rate0 * math.sqrt(plus), vt, p.theta, amps, E)
    mod = EllipticModulus.from_k(math.sqrt(_ratio(plus, minus)))
    amps = (*amps_xy, math.sqrt(plus))
    vt1 = _amplitude_from_dn(math.sqrt(plus), mod.kprime)
    return EllipticTrajectoryParams(Branch.HyperbolicNeg, mod, rate0 * math.sqrt(minus), vt1, p.theta, amps, E)


def _principal_orbit(tp: EllipticTrajectoryParams, u, orbit):
    """Principal-frame components at elliptic argument(s) ``u``."""
    s1, s2 = float(np.sign(orbit[0]) or 1.0), float(np.sign(orbit[1]) or 1.0)
    ax, ay, az = tp.amplitudes
    br = tp.branch
    if br in (Branch.Separatrix, Branch.Heteroclinic):
        with np.errstate(over="ignore"):
            sech = 1.0 / np.cosh(u)
        th = np.tanh(u)
        if br is Branch.Separatrix:
            comps = (s1 * ax * sech, -s1 * s2 * th, s2 * az * sech)
        else:
            comps = (s1 * ax * sech, s2 * ay * sech, s1 * s2 * th)
    else:
        sn, cn, dn = jacobi_sn_cn_dn(u, tp.modulus.k)
        if br is Branch.EllipticLow:
            comps = (s2 * ax * cn, -ay * sn, s2 * az * dn)
        elif br is Branch.EllipticHigh:
            comps = (s1 * ax * dn, -s1 * ay * sn, az * cn)
        elif br is Branch.HyperbolicPos:
            comps = (s1 * ax * dn, s1 * ay * cn, az * sn)
        else:
            comps = (s2 * ax * cn, s2 * ay * dn, az * sn)
    return np.stack(np.broadcast_arrays(*comps), axis=-1)


def analytic_trajectory(p: TopParameters, H: float, t, orbit=(1, 1), phase: float = 0.0):
    """Closed-form spin vector(s) ``S(t)`` on the orbit of energy ``H``.

    ``t`` may be a scalar or an array; the result has shape ``t.shape + (3,)``.
    ``orbit`` selects the mirror image (see module docstring) and ``phase`` is
    the elliptic argument at ``t = 0``.
    """
    tp = trajectory_params(p, H)
    t = np.asarray(t, dtype=float)
    u = phase + tp.rate * (tp.orientation * t)
    m = _principal_orbit(tp, u, orbit)
    return p.from_principal(m)


def _sign(x):
    return 1 if x >= 0 else -1


def phase_align(p: TopParameters, s0):
    """Energy, mirror selector and elliptic phase of the orbit through ``s0``.

    Returns ``(H, orbit, phase)`` such that
    ``analytic_trajectory(p, H, 0.0, orbit, phase)`` reproduces ``s0``.
    """
    s0 = np.asarray(s0, dtype=float)
    s0 = s0 / np.linalg.norm(s0)
    m = p.to_principal(s0)
    mx, my, mz = (float(c) for c in m)
    E = mx * mx / (2.0 * p.Ix) + my * my / (2.0 * p.Iy)
    H = p.orientation * E
    tp = trajectory_params(p, H)
    ax, ay, az = tp.amplitudes
    k = tp.modulus.k
    br = tp.branch
    with np.errstate(divide="ignore"):
        if br is Branch.Separatrix:
            orbit = (_sign(mx), _sign(mz))
            return H, orbit, float(np.arctanh(np.clip(-orbit[0] * orbit[1] * my, -1.0, 1.0)))
        if br is Branch.Heteroclinic:
            orbit = (_sign(mx), _sign(my))
            return H, orbit, float(np.arctanh(np.clip(orbit[0] * orbit[1] * mz, -1.0, 1.0)))
    if br is Branch.EllipticLow:
        orbit = (1, _sign(mz))
        if ax == 0.0:
            return H, orbit, 0.0
        sn, cn = -my / ay, orbit[1] * mx / ax
    elif br is Branch.EllipticHigh:
        orbit = (_sign(mx), 1)
        if az == 0.0:
            return H, orbit, 0.0
        sn, cn = -orbit[0] * my / ay, mz / az
    elif br is Branch.HyperbolicPos:
        orbit = (_sign(mx), 1)
        if az == 0.0:
            return H, orbit, 0.0
        sn, cn = mz / az, orbit[0] * my / ay
    else:
        orbit = (1, _sign(my))
        if az == 0.0:
            return H, orbit, 0.0
        sn, cn = mz / az, orbit[1] * mx / ax
    return H, orbit, float(jacobi_amplitude_inverse(sn, cn, k))


def trajectory_through(p: TopParameters, s0, t):
    """Closed-form trajectory passing through ``s0`` at ``t = 0``."""
    H, orbit, phase = phase_align(p, s0)
    return analytic_trajectory(p, H, t, orbit, phase)


def oscillation_period(p: TopParameters, H: float) -> float:
    """Full-state period ``4K/rate`` of the orbit with energy ``H``.

    Individual components can repeat sooner (``dn`` has period ``2K``); the
    value here is the recurrence time of the whole vector.
    """
    return trajectory_params(p, H).period


# ---------------------------------------------------------------------------
# heteroclinic orbits of the inverted top


def heteroclinic_orbit(p: TopParameters, t, selector: str = "l1"):
    """Zero-energy orbit joining the ``+-Mz`` saddles.

    ``l1`` passes the equator at ``Mx > 0, My > 0`` and the others follow the
    quadrants counterclockwise (``l2``: ``Mx < 0, My > 0`` and so on).  With
    ``sin(vartheta) = sqrt(Jx/(Jx+Jy))`` the orbit is
    ``M = (+-sin(vartheta) sech, +-cos(vartheta) sech, +-tanh)`` in ``Omega t``;
    ``l1`` and ``l3`` climb to ``+Mz`` as ``t -> +inf``, ``l2`` and ``l4`` descend.
    """
    if p.regime is not Regime.Hyperbolic:
        raise ValueError(f"heteroclinic orbits exist only in the Hyperbolic regime (have {p.regime.value})")
    try:
        orbit = HETEROCLINIC_SELECTORS[selector]
    except KeyError:
        raise ValueError(f"unknown selector {selector!r}; choose from {sorted(HETEROCLINIC_SELECTORS)}") from None
    return analytic_trajectory(p, 0.0, t, orbit)


def heteroclinic_area(Jx: float, Jy: float) -> float:
    """Solid angle ``2 pi - 4 arctan(sqrt(Jx/Jy))`` of the lune around ``+Mx``.

    The lune is bounded by the two heteroclinic orbits with ``Mx > 0``; its
    complement within the hemisphere, the lune around ``+My`` between the two
    orbits with ``My > 0``, has solid angle ``4 arctan(sqrt(Jx/Jy))``.
    """
    if not (Jx > 0 and Jy > 0) or not (math.isfinite(Jx) and math.isfinite(Jy)):
        raise ValueError("Jx and Jy must be positive and finite")
    return 2.0 * math.pi - 4.0 * math.atan(math.sqrt(Jx / Jy))


def heteroclinic_area_quadrature(p: TopParameters, samples: int = 20001, span: float = 40.0) -> float:
    """Measure the lune around ``+Mx`` from sampled heteroclinic orbits.

    The boundary is the union of the two orbits with ``Mx > 0``.  Seen from the
    ``Mx`` axis each boundary point has azimuth ``phi = atan2(Mz, My)`` and polar
    angle ``arccos(Mx)``, so the enclosed solid angle is the integral of
    ``1 - Mx`` over ``phi``, evaluated with the trapezoid rule.
    """
    t = np.linspace(-span, span, samples) / p.rate
    pts = np.concatenate([p.to_principal(heteroclinic_orbit(p, t, sel)) for sel in ("l1", "l4")])
    phi = np.arctan2(pts[:, 2], pts[:, 1])
    order = np.argsort(phi)
    phi, mx = phi[order], pts[order, 0]
    # close the curve across the branch cut of atan2
    phi = np.concatenate([phi, [phi[0] + 2.0 * math.pi]])
    mx = np.concatenate([mx, [mx[0]]])
    return float(np.trapezoid(1.0 - mx, phi))


def warn_if_separatrix(tp: EllipticTrajectoryParams):
    if tp.branch in (Branch.Separatrix, Branch.Heteroclinic):
        warnings.warn("separatrix energy: the period is infinite", RuntimeWarning, stacklevel=2)
