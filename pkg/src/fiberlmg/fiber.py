"""Coupled-mode field propagation, the Stokes map and LP01 fibre-mode quantities.

Field equations (retarded frame, per polarisation ``j`` with partner ``k``)::

    i du_j/dz = -xi_j/2 u_j + (beta2/2) d^2u_j/dtau^2
                - [a_j |u_j|^2 u_j + b_j (2|u_k|^2 u_j + u_k^2 u_j^*)
                   + c_j (2|u_j|^2 u_k + u_j^2 u_k^*) + d_j |u_k|^2 u_k]

with ``xi_x = delta_beta + i loss_x`` and ``xi_y = -delta_beta + i loss_y``.
"""

from __future__ import annotations

import math
import struct
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special

from .hamiltonian import QuadraticSpinHamiltonian
from .symmetry import CMECoefficients, build_spin_hamiltonian

V_CUTOFF = 2.405
DEFAULT_N1 = 1.45
ALIASING_THRESHOLD = 1e-8
DUMP_MAGIC = b"CMEF"
DUMP_VERSION = 1


class AliasingWarning(RuntimeWarning):
    """Spectral content reaches the edge of the frequency grid."""


class WeakGuidanceWarning(UserWarning):
    """Index contrast too large for the weakly guiding approximation."""


# ---------------------------------------------------------------------------
# Stokes map


def stokes_map(ux, uy):
    """``(S0, Sx, Sy, Sz)`` with ``Sx = 2 Re(ux* uy)``, ``Sy = i(ux* uy - uy* ux)``, ``Sz = |ux|^2 - |uy|^2``.

    Note ``Sy = -2 Im(ux* uy)``: the orientation is opposite to the usual
    Pauli-matrix convention, which flips the sign of the Stokes-space flow.
    """
    ux = np.asarray(ux, dtype=complex)
    uy = np.asarray(uy, dtype=complex)
    cross = np.conj(ux) * uy
    px, py = np.abs(ux) ** 2, np.abs(uy) ** 2
    out = (px + py, 2.0 * cross.real, -2.0 * cross.imag, px - py)
    if np.ndim(out[0]) == 0:
        return tuple(float(v) for v in out)
    return out


def spin_frame(stokes):
    """Unit spin vector ``(Sz, Sx, Sy) / S0`` from a Stokes 4-tuple.

    The cyclic relabelling keeps the orientation of the cross product, so the
    Stokes flow becomes ``dS/dz = grad(H) x S`` for the Hamiltonian returned by
    :func:`lmg_correspondence`.
    """
    s0, sx, sy, sz = (np.asarray(v, dtype=float) for v in stokes)
    return np.stack([sz / s0, sx / s0, sy / s0], axis=-1)


def lmg_correspondence(coeffs: CMECoefficients, power: float) -> QuadraticSpinHamiltonian:
    """Spin Hamiltonian whose trajectories are the normalised Stokes trajectories.

    ``power`` is the conserved total power ``S0``; ``z`` plays the role of time.
    The map uses the spin frame of :func:`spin_frame`.  The Stokes-space
    Hamiltonian ``G = dB Sz + cz Sz^2 + cx Sx^2 + 2 c Sz Sx + ...`` becomes
    ``alpha = 2 cz S0``, ``beta = 2 c S0``, ``gamma = 2 cx S0`` with linear field
    ``(dB + lin_z S0, lin_x S0, 0)``.
    """
    if not power > 0:
        raise ValueError("total power must be positive")
    shc = build_spin_hamiltonian(coeffs)
    alpha = 2.0 * shc.cz * power
    beta = 2.0 * shc.c_cross * power
    gamma = 2.0 * shc.cx * power
    if not shc.fwm:
        # -(cx/2)(Sx^2 - Sy^2) rewritten with Sy^2 = S0^2 - Sz^2 - Sx^2
        alpha -= shc.cx * power
        gamma -= 2.0 * shc.cx * power
    fld = (shc.delta_beta + shc.lin_z * power, shc.lin_x * power, 0.0)
    return QuadraticSpinHamiltonian(alpha, beta, gamma, fld)


# ---------------------------------------------------------------------------
# CW coupled-mode equations


def cme_rhs(coeffs: CMECoefficients, ux, uy, *, include_linear: bool = True):
    """``(dux/dz, duy/dz)`` of the dispersionless coupled-mode equations (elementwise)."""
    px, py = (ux * np.conj(ux)).real, (uy * np.conj(uy)).real
    fwm = 1.0 if coeffs.fwm else 0.0
    nx = (
        coeffs.a_x * px * ux
        + coeffs.b_x * (2.0 * py * ux + fwm * uy * uy * np.conj(ux))
        + coeffs.c_x * (2.0 * px * uy + ux * ux * np.conj(uy))
        + coeffs.d_x * py * uy
    )
    ny = (
        coeffs.a_y * py * uy
        + coeffs.b_y * (2.0 * px * uy + fwm * ux * ux * np.conj(uy))
        + coeffs.c_y * (2.0 * py * ux + uy * uy * np.conj(ux))
        + coeffs.d_y * px * ux
    )
    if include_linear:
        nx = nx + 0.5 * coeffs.xi_x * ux
        ny = ny + 0.5 * coeffs.xi_y * uy
    return 1j * nx, 1j * ny


def _rk4_step(coeffs, ux, uy, dz, include_linear=True):
    k1 = cme_rhs(coeffs, ux, uy, include_linear=include_linear)
    k2 = cme_rhs(coeffs, ux + 0.5 * dz * k1[0], uy + 0.5 * dz * k1[1], include_linear=include_linear)
    k3 = cme_rhs(coeffs, ux + 0.5 * dz * k2[0], uy + 0.5 * dz * k2[1], include_linear=include_linear)
    k4 = cme_rhs(coeffs, ux + dz * k3[0], uy + dz * k3[1], include_linear=include_linear)
    ux = ux + dz / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    uy = uy + dz / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
    return ux, uy


@dataclass(frozen=True)
class CWTrajectory:
    z: np.ndarray
    ux: np.ndarray
    uy: np.ndarray

    def stokes(self):
        return stokes_map(self.ux, self.uy)

    def __iter__(self):
        return iter(zip(self.z, self.ux, self.uy))


def _step_count(z_end, dz):
    if not dz > 0:
        raise ValueError("dz must be positive")
    if not z_end >= 0:
        raise ValueError("z_end must be non-negative")
    n = int(round(z_end / dz))
    if n == 0 and z_end > 0:
        n = 1
    return n


def cw_evolve(coeffs: CMECoefficients, u0, z_end: float, dz: float, *, sample_every: int = 1) -> CWTrajectory:
    """RK4 integration of the CW coupled-mode equations from ``u0 = (ux, uy)``.

    The step is adjusted to ``z_end / round(z_end / dz)`` so the run ends on ``z_end``.
    """
    n = _step_count(z_end, dz)
    h = z_end / n if n else 0.0
    ux, uy = complex(u0[0]), complex(u0[1])
    zs, xs, ys = [0.0], [ux], [uy]
    for i in range(1, n + 1):
        ux, uy = _rk4_step(coeffs, ux, uy, h)
        if i % sample_every == 0 or i == n:
            zs.append(i * h)
            xs.append(ux)
            ys.append(uy)
    return CWTrajectory(np.array(zs), np.array(xs), np.array(ys))


def high_birefringence_phases(gamma: float, px: float, py: float, z):
    """Closed-form SPM/XPM phases ``(phi_x, phi_y, dphi)`` with the exchange term averaged out."""
    z = np.asarray(z, dtype=float)
    phi_x = gamma * (px + 2.0 * py / 3.0) * z
    phi_y = gamma * (py + 2.0 * px / 3.0) * z
    return phi_x, phi_y, phi_x - phi_y


# ---------------------------------------------------------------------------
# dispersive propagation


@dataclass
class FieldGrid:
    """Two envelopes on the uniform retarded-time grid ``tau_i = tau0 + i dtau``."""

    n: int
    dtau: float
    ux: np.ndarray
    uy: np.ndarray
    tau0: float = 0.0

    def __post_init__(self):
        if self.n < 2 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two >= 2, got {self.n}")
        if not (self.dtau > 0 and math.isfinite(self.dtau)):
            raise ValueError("dtau must be positive and finite")
        self.ux = np.asarray(self.ux, dtype=complex).copy()
        self.uy = np.asarray(self.uy, dtype=complex).copy()
        if self.ux.shape != (self.n,) or self.uy.shape != (self.n,):
            raise ValueError("ux and uy must both have length n")
        if not (np.all(np.isfinite(self.ux)) and np.all(np.isfinite(self.uy))):
            raise ValueError("field samples must be finite")

    @property
    def tau(self) -> np.ndarray:
        return self.tau0 + self.dtau * np.arange(self.n)

    @property
    def omega(self) -> np.ndarray:
        """Angular frequencies ``2 pi m / (n dtau)`` in FFT (signed) order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dtau)

    @property
    def total_power(self) -> float:
        return float(np.sum(np.abs(self.ux) ** 2 + np.abs(self.uy) ** 2) * self.dtau)

    def mean_stokes(self):
        """Window-averaged Stokes parameters (equal to the pointwise values for a flat field)."""
        return tuple(float(np.mean(v)) for v in stokes_map(self.ux, self.uy))

    def copy(self) -> "FieldGrid":
        return FieldGrid(self.n, self.dtau, self.ux, self.uy, self.tau0)

    @classmethod
    def from_shape(
        cls,
        n: int,
        dtau: float,
        shape: str = "cw",
        power_x: float = 1.0,
        power_y: float = 0.0,
        phase_y: float = 0.0,
        t0: float = 1.0,
    ) -> "FieldGrid":
        """Centred input field; ``shape`` is ``cw``, ``gaussian`` or ``sech`` with width ``t0``."""
        if power_x < 0 or power_y < 0:
            raise ValueError("powers must be non-negative")
        tau = dtau * (np.arange(n) - n // 2)
        if shape == "cw":
            env = np.ones(n)
        elif shape == "gaussian":
            env = np.exp(-(tau**2) / (2.0 * t0**2))
        elif shape == "sech":
            env = 1.0 / np.cosh(tau / t0)
        else:
            raise ValueError(f"unknown pulse shape {shape!r}")
        ux = math.sqrt(power_x) * env
        uy = math.sqrt(power_y) * np.exp(1j * phase_y) * env
        return cls(n, dtau, ux, uy, tau0=float(tau[0]))


@dataclass(frozen=True)
class PropagationParams:
    beta2: float
    coeffs: CMECoefficients
    dz: float
    z_end: float
    beta2_y: float | None = None

    def __post_init__(self):
        if not (self.dz > 0 and math.isfinite(self.dz)):
            raise ValueError("dz must be positive")
        if not (self.z_end >= 0 and math.isfinite(self.z_end)):
            raise ValueError("z_end must be non-negative")
        if not math.isfinite(self.beta2):
            raise ValueError("beta2 must be finite")


def _aliasing_level(spec):
    power = np.abs(spec) ** 2
    peak = power.max()
    if peak == 0.0:
        return 0.0
    n = power.size
    edge = max(n // 16, 1)
    # outermost frequencies sit around index n/2 in FFT order
    tail = power[n // 2 - edge : n // 2 + edge]
    return float(tail.max() / peak)


@dataclass
class PropagationResult:
    grid: FieldGrid
    z: np.ndarray
    stokes: np.ndarray
    warnings: list[str] = field(default_factory=list)
    dphi: np.ndarray | None = None


def split_step_propagate(
    grid: FieldGrid,
    params: PropagationParams,
    *,
    checkpoints: int | None = None,
    return_history: bool = False,
    track_index: int | None = None,
):
    """Symmetric split-step propagation over ``params.z_end``.

    Each step applies half of the linear operator ``exp(i (beta2 w^2/2 + xi_j/2) dz/2)``
    in the spectral domain, one RK4 step of the pointwise nonlinear terms,
    then the other linear half.  Loss therefore enters as ``exp(-loss_j dz/4)``
    per half step.  Warns with :class:`AliasingWarning` when spectral tails
    exceed ``1e-8`` of the peak.

    Returns the final grid, or a :class:`PropagationResult` with window-averaged
    Stokes checkpoints when ``return_history`` is set.  With ``track_index`` the
    result also carries the unwrapped relative phase ``arg(ux) - arg(uy)`` at
    that sample for every checkpoint.
    """
    c = params.coeffs
    n = _step_count(params.z_end, params.dz)
    h = params.z_end / n if n else 0.0
    w2 = grid.omega**2
    b2y = params.beta2 if params.beta2_y is None else params.beta2_y
    half_x = np.exp(0.5j * h * (0.5 * params.beta2 * w2 + 0.5 * c.xi_x))
    half_y = np.exp(0.5j * h * (0.5 * b2y * w2 + 0.5 * c.xi_y))
    ux, uy = grid.ux.copy(), grid.uy.copy()
    every = max(n // checkpoints, 1) if checkpoints else max(n, 1)
    zs, st = [0.0], [stokes_avg(ux, uy)]
    worst = max(_aliasing_level(np.fft.fft(ux)), _aliasing_level(np.fft.fft(uy)))
    tracked = track_index is not None
    phase = [np.angle(ux[track_index] * np.conj(uy[track_index]))] if tracked else []
    keep = [0]
    for i in range(1, n + 1):
        fx, fy = np.fft.fft(ux) * half_x, np.fft.fft(uy) * half_y
        ux, uy = np.fft.ifft(fx), np.fft.ifft(fy)
        ux, uy = _rk4_step(c, ux, uy, h, include_linear=False)
        fx, fy = np.fft.fft(ux) * half_x, np.fft.fft(uy) * half_y
        worst = max(worst, _aliasing_level(fx), _aliasing_level(fy))
        ux, uy = np.fft.ifft(fx), np.fft.ifft(fy)
        if tracked:
            phase.append(np.angle(ux[track_index] * np.conj(uy[track_index])))
        if i % every == 0 or i == n:
            keep.append(i)
            zs.append(i * h)
            st.append(stokes_avg(ux, uy))
    notes = []
    if worst > ALIASING_THRESHOLD:
        msg = f"spectral tails reach {worst:.2e} of the peak; refine dtau or widen the grid"
        warnings.warn(msg, AliasingWarning, stacklevel=2)
        notes.append(msg)
    out = FieldGrid(grid.n, grid.dtau, ux, uy, grid.tau0)
    if return_history:
        dphi = np.unwrap(np.array(phase))[keep] if tracked else None
        return PropagationResult(out, np.array(zs), np.array(st), notes, dphi)
    return out


def stokes_avg(ux, uy):
    return [float(np.mean(v)) for v in stokes_map(ux, uy)]


def gaussian_linear_solution(tau, z, beta2, t0, amplitude=1.0):
    """Closed-form dispersive evolution of ``amplitude * exp(-tau^2 / (2 t0^2))`` without nonlinearity."""
    q = t0 * t0 - 1j * beta2 * z
    return amplitude * t0 / np.sqrt(q) * np.exp(-np.asarray(tau) ** 2 / (2.0 * q))


# ---------------------------------------------------------------------------
# binary field dump

_HEADER = struct.Struct("<4sIId")


def write_field_dump(path, grid: FieldGrid) -> None:
    """Little-endian dump: ``CMEF``, version u32, n u32, dtau f64, then ux and uy as interleaved re/im f64."""
    body = np.concatenate([grid.ux, grid.uy]).astype("<c16")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(DUMP_MAGIC, DUMP_VERSION, grid.n, grid.dtau))
        fh.write(body.tobytes())


def read_field_dump(path) -> FieldGrid:
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, version, n, dtau = _HEADER.unpack_from(raw)
    if magic != DUMP_MAGIC:
        raise ValueError("not a field dump (bad magic)")
    if version != DUMP_VERSION:
        raise ValueError(f"unsupported dump version {version}")
    data = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size)
    if data.size != 2 * n:
        raise ValueError("truncated field dump")
    return FieldGrid(n, dtau, data[:n], data[n:])


# ---------------------------------------------------------------------------
# fibre mode


@dataclass(frozen=True)
class FiberGeometry:
    a: float
    n1: float
    nc: float
    lambda0: float

    def __post_init__(self):
        for name in ("a", "n1", "nc", "lambda0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite")
        if not self.n1 > self.nc:
            raise ValueError("core index must exceed cladding index")
        if (self.n1 - self.nc) / self.n1 >= 0.01:
            warnings.warn("(n1 - nc)/n1 >= 0.01: weakly guiding approximation is doubtful", WeakGuidanceWarning, stacklevel=2)

    @classmethod
    def from_index_step(cls, a: float, delta_n: float, lambda0: float, n1: float = DEFAULT_N1) -> "FiberGeometry":
        return cls(a, n1, n1 - delta_n, lambda0)

    @property
    def k0(self) -> float:
        return 2.0 * math.pi / self.lambda0

    @property
    def numerical_aperture(self) -> float:
        return math.sqrt((self.n1 - self.nc) * (self.n1 + self.nc))

    @property
    def V(self) -> float:
        return self.k0 * self.a * self.numerical_aperture

    def with_wavelength(self, lambda0: float) -> "FiberGeometry":
        return FiberGeometry(self.a, self.n1, self.nc, lambda0)

    def to_dict(self) -> dict:
        return {"a": self.a, "n1": self.n1, "nc": self.nc, "lambda0": self.lambda0}


@dataclass(frozen=True)
class ModeCheck:
    V: float
    single_mode: bool


def single_mode_check(geom: FiberGeometry) -> ModeCheck:
    V = geom.V
    return ModeCheck(V, V < V_CUTOFF)


def cutoff_wavelength(a: float, n1: float, nc: float) -> float:
    """Wavelength where ``V`` equals the single-mode threshold."""
    return 2.0 * math.pi * a * math.sqrt((n1 - nc) * (n1 + nc)) / V_CUTOFF


class BelowCutoffError(ValueError):
    """No guided solution for the requested mode."""


@dataclass(frozen=True)
class LP01Mode:
    beta: float
    p: float
    q: float
    n_e: float
    U: float
    W: float
    V: float
    a: float
    k0: float

    def profile(self, r):
        """Normalised field ``F(r)``: ``J0(p r)/J0(p a)`` in the core, ``K0(q r)/K0(q a)`` outside."""
        r = np.asarray(r, dtype=float)
        inside = special.j0(self.p * np.minimum(r, self.a)) / special.j0(self.U)
        with np.errstate(over="ignore", invalid="ignore"):
            outside = special.k0(self.q * np.maximum(r, self.a)) / special.k0(self.W)
        out = np.where(r <= self.a, inside, outside)
        return float(out) if out.ndim == 0 else out

    @property
    def sampler(self) -> Callable:
        return self.profile

    def residual(self) -> float:
        return _lp01_condition(self.U, self.V)

    def to_dict(self) -> dict:
        return {"beta": self.beta, "p": self.p, "q": self.q, "n_e": self.n_e, "U": self.U, "W": self.W, "V": self.V}


def _lp01_condition(U, V):
    W = math.sqrt(max(V * V - U * U, 0.0))
    return U * special.j1(U) / special.j0(U) - W * special.k1(W) / special.k0(W)


def _lp01_condition_log_w(x, V):
    W = math.exp(x)
    U = math.sqrt((V - W) * (V + W))
    return U * special.j1(U) / special.j0(U) - W * special.k1(W) / special.k0(W)


# smallest ln(W) with representable K0/K1; below it the mode is wider than double range
_LOG_W_FLOOR = -700.0


def lp01_solve(geom: FiberGeometry) -> LP01Mode:
    """Fundamental mode from ``U J1(U)/J0(U) = W K1(W)/K0(W)``, ``U^2 + W^2 = V^2``.

    ``U = p a`` and ``W = q a`` with ``p^2 = n1^2 k0^2 - beta^2`` and
    ``q^2 = beta^2 - nc^2 k0^2``.  The root is bracketed in ``ln W`` because at
    small ``V`` the cladding decay constant is exponentially small
    (``W ~ exp(-2/V^2)``) and cannot be resolved through ``U``.
    """
    V = geom.V
    if not V > 0:
        raise BelowCutoffError("V must be positive")
    j01 = special.jn_zeros(0, 1)[0]
    # U < j01 keeps J0(U) > 0; that maps to W > sqrt(V^2 - j01^2)
    w_min = math.sqrt(V * V - j01 * j01) if V > j01 else 0.0
    lo = math.log(w_min * (1.0 + 1e-12)) if w_min > 0 else _LOG_W_FLOOR
    hi = math.log(V) - 1e-12
    f_lo, f_hi = _lp01_condition_log_w(lo, V), _lp01_condition_log_w(hi, V)
    if not (math.isfinite(f_lo) and math.isfinite(f_hi)) or not (f_lo > 0 > f_hi):
        raise BelowCutoffError(f"no LP01 root bracketed for V={V!r} (the mode is wider than floating-point range)")
    x = optimize.brentq(_lp01_condition_log_w, lo, hi, args=(V,), xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=300)
    W = math.exp(x)
    U = math.sqrt((V - W) * (V + W))
    k0 = geom.k0
    p, q = U / geom.a, W / geom.a
    beta = math.sqrt(geom.n1**2 * k0**2 - p * p)
    return LP01Mode(beta, p, q, beta / k0, U, W, V, geom.a, k0)


def _radial_moments(mode: LP01Mode):
    """``(int |F|^2 dA, int |F|^4 dA)`` by adaptive radial quadrature."""
    a = mode.a

    def moment(power):
        inner, _ = integrate.quad(lambda r: r * (special.j0(mode.p * r) / special.j0(mode.U)) ** power, 0.0, a, epsabs=0.0, epsrel=1e-13, limit=200)
        # substitute x = q r so the outer integral has unit decay scale
        outer, _ = integrate.quad(
            lambda x: x * (special.k0(x) / special.k0(mode.W)) ** power, mode.W, np.inf, epsabs=0.0, epsrel=1e-13, limit=200
        )
        return 2.0 * math.pi * (inner + outer / (mode.q * mode.q))

    return moment(2), moment(4)


def overlap_ratio(mode: LP01Mode) -> float:
    """``int |F|^4 dA / int |F|^2 dA`` for the profile normalised to 1 at the core edge."""
    m2, m4 = _radial_moments(mode)
    return m4 / m2


def effective_area(mode: LP01Mode) -> float:
    """``(int |F|^2 dA)^2 / int |F|^4 dA`` in square metres."""
    m2, m4 = _radial_moments(mode)
    return m2 * m2 / m4


def gamma_parameter(geom: FiberGeometry, chi3_xxxx: float, mode: LP01Mode | None) -> float:
    """``(3 k0 / (8 n_e)) chi3 int |F|^4 / int |F|^2`` with ``F`` from the solved mode."""
    if mode is None:
        raise ValueError("mode must be solved before computing the nonlinearity parameter")
    if not math.isfinite(chi3_xxxx):
        raise ValueError("chi3 must be finite")
    if chi3_xxxx == 0.0:
        return 0.0
    return 3.0 * geom.k0 / (8.0 * mode.n_e) * chi3_xxxx * overlap_ratio(mode)


# ---------------------------------------------------------------------------
# length scales


@dataclass(frozen=True)
class LengthScales:
    L_D: float
    L_NL: float
    L_B: float
    notes: tuple[str, ...] = ()

    def advisories(self, length: float, margin: float = 10.0) -> dict:
        """Which effects may be dropped for a fibre of ``length``."""
        return {
            "dispersion_negligible": length * margin <= self.L_D,
            "nonlinearity_negligible": length * margin <= self.L_NL,
            "fwm_negligible": length >= margin * self.L_B,
        }

    def to_dict(self) -> dict:
        return {"L_D": self.L_D, "L_NL": self.L_NL, "L_B": self.L_B, "notes": list(self.notes)}


def length_scales(P0: float, T0: float, beta2: float, delta_beta: float, gamma: float) -> LengthScales:
    """Dispersion ``T0^2/|beta2|``, nonlinear ``1/(gamma P0)`` and beat ``2 pi/|delta_beta|`` lengths.

    A vanishing denominator gives ``inf`` for that scale and a note, not an error.
    """
    notes = []

    def safe(num, den, label):
        if den == 0.0:
            notes.append(f"{label}: zero denominator, scale is infinite")
            return math.inf
        return num / den

    L_D = safe(T0 * T0, abs(beta2), "L_D")
    L_NL = safe(1.0, abs(gamma * P0), "L_NL")
    L_B = safe(2.0 * math.pi, abs(delta_beta), "L_B")
    return LengthScales(L_D, L_NL, L_B, tuple(notes))
