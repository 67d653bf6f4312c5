"""Jacobi elliptic functions, complete elliptic integrals and theta functions.

Production evaluation goes through the arithmetic-geometric mean (descending
Landen transformation).  The theta-quotient route is kept as an independent
second implementation so the two can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import elliprf

__all__ = [
    "EllipticModulus",
    "QuarterPeriods",
    "ThetaIndex",
    "complete_elliptic_K",
    "quarter_periods",
    "jacobi_sn_cn_dn",
    "jacobi_aux",
    "elliptic_f",
    "jacobi_amplitude_inverse",
    "theta",
    "default_theta_truncation",
    "sn_cn_dn_via_theta",
]

_AGM_TOL = 1e-16
_AGM_MAX_ITER = 40


@dataclass(frozen=True)
class EllipticModulus:
    """Modulus ``k`` with its complement ``kprime`` (``k**2 + kprime**2 == 1``)."""

    k: float
    kprime: float

    @classmethod
    def from_k(cls, k: float) -> "EllipticModulus":
        if not (k >= 0.0):
            raise ValueError(f"elliptic modulus must be >= 0, got {k!r}")
        if k > 1.0:
            return cls(k, float("nan"))
        return cls(float(k), _complement(k))


@dataclass(frozen=True)
class QuarterPeriods:
    K: float
    Kprime: float


@dataclass(frozen=True)
class ThetaIndex:
    mu: int
    nu: int
    z: complex
    tau: complex

    def __post_init__(self):
        if self.mu not in (0, 1) or self.nu not in (0, 1):
            raise ValueError("theta characteristics must be 0 or 1")
        if not complex(self.tau).imag > 0:
            raise ValueError(f"Im(tau) must be positive, got tau={self.tau!r}")


def _complement(k):
    # (1-k)(1+k) keeps precision when k is close to 1
    return math.sqrt(max((1.0 - k) * (1.0 + k), 0.0))


def _check_modulus(k):
    if not math.isfinite(k) or k < 0.0:
        raise ValueError(f"elliptic modulus must be finite and >= 0, got {k!r}")


def _agm(a, b):
    for _ in range(_AGM_MAX_ITER):
        if abs(a - b) <= _AGM_TOL * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_elliptic_K(k: float) -> float:
    """Complete elliptic integral of the first kind, ``K(k) = pi / (2 agm(1, k'))``.

    Raises ``ValueError`` unless ``0 <= k < 1``.
    """
    if not math.isfinite(k) or k < 0.0 or k >= 1.0:
        raise ValueError(f"complete_elliptic_K requires 0 <= k < 1, got {k!r}")
    if k == 0.0:
        return math.pi / 2
    return math.pi / (2.0 * _agm(1.0, _complement(k)))


def quarter_periods(k: float) -> QuarterPeriods:
    """Real and imaginary quarter periods ``K(k)`` and ``K'(k) = K(k')`` for ``0 < k < 1``."""
    if not 0.0 < k < 1.0:
        raise ValueError(f"quarter_periods requires 0 < k < 1, got {k!r}")
    return QuarterPeriods(complete_elliptic_K(k), complete_elliptic_K(_complement(k)))


def _landen_sequence(k):
    """AGM sequences (a_n, c_n) for the descending Landen recursion."""
    a, b, c = 1.0, _complement(k), k
    a_seq, c_seq = [a], [c]
    for _ in range(_AGM_MAX_ITER):
        if abs(c) <= _AGM_TOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return a_seq, c_seq


def _sncndn_unit(u, k):
    """sn, cn, dn for real array ``u`` and ``0 <= k < 1`` via the AGM phase recursion."""
    a_seq, c_seq = _landen_sequence(k)
    n = len(a_seq) - 1
    if n == 0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    phi = (2.0**n) * a_seq[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(c_seq[j] / a_seq[j] * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    # dn^2 = k'^2 + k^2 cn^2 has no cancellation, unlike 1 - k^2 sn^2
    kp = _complement(k)
    dn = np.sqrt(kp * kp + k * k * cn * cn)
    return sn, cn, dn


def _reduce_period(u, k):
    K = complete_elliptic_K(k)
    period = 4.0 * K
    return u - period * np.round(u / period)


def jacobi_sn_cn_dn(u, k: float):
    """Jacobi ``(sn, cn, dn)`` of real ``u`` (scalar or array) for any modulus ``k >= 0``.

    ``k == 1`` returns the hyperbolic limits ``(tanh, sech, sech)`` and ``k > 1``
    goes through the reciprocal-modulus identities.
    """
    _check_modulus(k)
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("jacobi_sn_cn_dn requires finite arguments")

    if k == 1.0:
        sech = 1.0 / np.cosh(u)
        sn, cn, dn = np.tanh(u), sech, sech.copy()
    elif k > 1.0:
        s1, c1, d1 = jacobi_sn_cn_dn(k * u, 1.0 / k)
        sn, cn, dn = np.asarray(s1) / k, np.asarray(d1), np.asarray(c1)
    else:
        sign = np.where(u < 0.0, -1.0, 1.0)
        ur = _reduce_period(np.abs(u), k)
        sn, cn, dn = _sncndn_unit(ur, k)
        sn = sign * sn

    if scalar:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn


def jacobi_aux(u, k: float):
    """Auxiliary quotients ``(cd, nd, sd) = (cn/dn, 1/dn, sn/dn)``."""
    sn, cn, dn = jacobi_sn_cn_dn(u, k)
    if np.any(np.asarray(dn) == 0.0):
        raise ZeroDivisionError("dn vanishes; auxiliary functions are singular here")
    return np.divide(cn, dn), np.divide(1.0, dn), np.divide(sn, dn)


def elliptic_f(phi, k: float):
    """Incomplete integral of the first kind ``F(phi, k)`` for real ``phi`` and ``0 <= k <= 1``.

    Uses Carlson's symmetric form on ``|phi| <= pi/2`` and the quasi-periodicity
    ``F(phi + m pi) = F(phi) + 2 m K`` beyond it.
    """
    _check_modulus(k)
    if k > 1.0:
        raise ValueError("elliptic_f requires k <= 1")
    phi = np.asarray(phi, dtype=float)
    m = np.round(phi / np.pi)
    r = phi - m * np.pi
    s, c = np.sin(r), np.cos(r)
    base = s * elliprf(c * c, 1.0 - k * k * s * s, 1.0)
    if np.any(m != 0):
        if k == 1.0:
            raise ValueError("F(phi, 1) diverges at phi = pi/2")
        base = base + 2.0 * m * complete_elliptic_K(k)
    return float(base) if base.ndim == 0 else base


def jacobi_amplitude_inverse(sn, cn, k: float):
    """Smallest-magnitude real ``u`` with ``sn(u, k) = sn`` and ``cn(u, k) = cn``.

    Returned in ``(-2K, 2K]``; inputs need not be exactly normalised.
    """
    phi = np.arctan2(sn, cn)
    return elliptic_f(phi, k)


def default_theta_truncation(tau: complex, z: complex = 0.0) -> int:
    """Smallest ``N`` with ``exp(-pi Im(tau) N^2) < 1e-16`` around the dominant term, capped at 64."""
    im_tau = complex(tau).imag
    if im_tau <= 0:
        raise ValueError("Im(tau) must be positive")
    n0 = math.ceil(math.sqrt(16.0 * math.log(10.0) / (math.pi * im_tau)))
    shift = math.ceil(abs(complex(z).imag) / im_tau)
    return min(n0 + shift + 1, 64)


def theta(idx: ThetaIndex, truncation: int | None = None) -> complex:
    """Partial sum of the Jacobi theta series ``Theta_{mu nu}(z, tau)`` over ``n in [-N, N]``."""
    tau = complex(idx.tau)
    if tau.imag <= 0:
        raise ValueError("Im(tau) must be positive")
    if truncation is None:
        truncation = default_theta_truncation(tau, idx.z)
    if truncation < 1:
        raise ValueError("truncation must be a positive integer")
    return complex(_theta_sum(idx.mu, idx.nu, np.asarray(idx.z, dtype=complex), tau, truncation))


def _theta_sum(mu, nu, z, tau, trunc):
    n = np.arange(-trunc, trunc + 1, dtype=float) + 0.5 * mu
    z = np.asarray(z, dtype=complex)
    expo = np.pi * 1j * (tau * n**2 + 2.0 * n * (z[..., None] + 0.5 * nu))
    return np.exp(expo).sum(axis=-1)


def sn_cn_dn_via_theta(u, k: float):
    """sn, cn, dn from quotients of theta functions with ``tau = i K'/K``, for ``0 < k < 1``."""
    if not 0.0 < k < 1.0:
        raise ValueError(f"theta route requires 0 < k < 1, got {k!r}")
    qp = quarter_periods(k)
    tau = 1j * qp.Kprime / qp.K
    scalar = np.ndim(u) == 0
    z = np.asarray(u, dtype=float) / (2.0 * qp.K)
    trunc = default_theta_truncation(tau)

    def th(mu, nu, arg):
        return _theta_sum(mu, nu, np.asarray(arg, dtype=complex), tau, trunc)

    t01 = th(0, 1, z)
    sn = th(0, 1, 0.5) * th(1, 1, z) / (th(1, 1, 0.5) * t01)
    cn = th(0, 1, 0.0) * th(1, 0, z) / (th(1, 0, 0.0) * t01)
    dn = th(0, 1, 0.0) * th(0, 0, z) / (th(0, 0, 0.0) * t01)
    # the mu=1 terms carry a common phase; the quotients are real for real u
    sn, cn, dn = sn.real, cn.real, dn.real
    if scalar:
        return float(sn), float(cn), float(dn)
    return sn, cn, dn
