"""Crystal-symmetry constraints on the coupled-mode coefficients.

Each point-group family fixes linear relations among the eight nonlinear
coefficients ``(a_x, a_y, b_x, b_y, c_x, c_y, d_x, d_y)``.  This module holds
those tables, turns a 2x2x2x2 susceptibility table into coefficients, decides
whether a coefficient set admits a Hamiltonian (NLS) form, and expands that
Hamiltonian in Stokes components.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

COEFF_NAMES = ("a_x", "a_y", "b_x", "b_y", "c_x", "c_y", "d_x", "d_y")

REL_TOL = 1e-12
ABS_TOL = 1e-15


class PointGroupFamily(enum.Enum):
    Isotropic = "Isotropic"
    Cubic23m3 = "Cubic23m3"
    Cubic432_43m_m3m = "Cubic432_43m_m3m"
    Hex6_6bar_6m = "Hex6_6bar_6m"
    Hex622_6mm_62m_6mmm = "Hex622_6mm_62m_6mmm"
    Trig3_3bar = "Trig3_3bar"
    Trig32_3m_3barm = "Trig32_3m_3barm"
    Tet4_4bar_4m = "Tet4_4bar_4m"
    Tet422_4mm_42m_4mmm = "Tet422_4mm_42m_4mmm"
    MonoTriclinicOrtho = "MonoTriclinicOrtho"

    @classmethod
    def parse(cls, name: str) -> "PointGroupFamily":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(
                f"unsupported point-group family {name!r}; expected one of "
                + ", ".join(f.value for f in cls)
            ) from None


# point groups named for each family, for reports
POINT_GROUPS = {
    PointGroupFamily.Isotropic: ("isotropic",),
    PointGroupFamily.Cubic23m3: ("23", "m3"),
    PointGroupFamily.Cubic432_43m_m3m: ("432", "-43m", "m3m"),
    PointGroupFamily.Hex6_6bar_6m: ("6", "-6", "6/m"),
    PointGroupFamily.Hex622_6mm_62m_6mmm: ("622", "6mm", "-62m", "6/mmm"),
    PointGroupFamily.Trig3_3bar: ("3", "-3"),
    PointGroupFamily.Trig32_3m_3barm: ("32", "3m", "-3m"),
    PointGroupFamily.Tet4_4bar_4m: ("4", "-4", "4/m"),
    PointGroupFamily.Tet422_4mm_42m_4mmm: ("422", "4mm", "-42m", "4/mmm"),
    PointGroupFamily.MonoTriclinicOrtho: ("1", "-1", "2", "m", "2/m", "222", "mm2", "mmm"),
}


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(weight * coefficient) == 0`` over the named coefficients."""

    label: str
    weights: tuple[tuple[str, float], ...]

    def residual(self, coeffs: "CMECoefficients") -> float:
        return sum(w * getattr(coeffs, name) for name, w in self.weights)

    def scale(self, coeffs: "CMECoefficients") -> float:
        return max(abs(w * getattr(coeffs, name)) for name, w in self.weights)

    def holds(self, coeffs: "CMECoefficients") -> bool:
        return _close_to_zero(self.residual(coeffs), self.scale(coeffs))

    def to_dict(self) -> dict:
        return {"relation": self.label, "weights": dict(self.weights)}


def _close_to_zero(residual, scale):
    return abs(residual) <= max(REL_TOL * scale, ABS_TOL)


def _eq(lhs, rhs, factor=1.0):
    """Constraint ``lhs == factor * rhs``."""
    if factor == 1.0:
        label = f"{lhs} = {rhs}"
    elif factor == -1.0:
        label = f"{lhs} = -{rhs}"
    else:
        label = f"{lhs} = {factor:g}*{rhs}"
    return LinearConstraint(label, ((lhs, 1.0), (rhs, -factor)))


def _zero(name):
    return LinearConstraint(f"{name} = 0", ((name, 1.0),))


_ISOTROPIC = (
    _eq("a_x", "a_y"),
    _eq("a_x", "b_x", 3.0),
    _eq("a_y", "b_y", 3.0),
    _zero("c_x"),
    _zero("c_y"),
    _zero("d_x"),
    _zero("d_y"),
)
_CUBIC_MAJOR = (_eq("a_x", "a_y"), _zero("c_x"), _zero("c_y"), _zero("d_x"), _zero("d_y"))
_CUBIC_MINOR = (
    _eq("a_x", "a_y"),
    _eq("b_x", "b_y"),
    _zero("c_x"),
    _zero("c_y"),
    _zero("d_x"),
    _zero("d_y"),
)
_TETRAGONAL = (
    _eq("a_x", "a_y"),
    _eq("b_x", "b_y"),
    _eq("c_x", "c_y", -1.0),
    _eq("d_x", "d_y", -1.0),
)
_HEXAGONAL = _TETRAGONAL + (_eq("a_x", "b_x", 3.0), _eq("d_x", "c_x", 3.0))

_TABLES = {
    PointGroupFamily.Isotropic: _ISOTROPIC,
    PointGroupFamily.Cubic23m3: _CUBIC_MAJOR,
    PointGroupFamily.Cubic432_43m_m3m: _CUBIC_MINOR,
    PointGroupFamily.Hex6_6bar_6m: _HEXAGONAL,
    PointGroupFamily.Hex622_6mm_62m_6mmm: _ISOTROPIC,
    # trigonal classes reduce to the hexagonal / isotropic equations
    PointGroupFamily.Trig3_3bar: _HEXAGONAL,
    PointGroupFamily.Trig32_3m_3barm: _ISOTROPIC,
    PointGroupFamily.Tet4_4bar_4m: _TETRAGONAL,
    PointGroupFamily.Tet422_4mm_42m_4mmm: _CUBIC_MINOR,
    PointGroupFamily.MonoTriclinicOrtho: (),
}


def constraint_table(family: PointGroupFamily | str) -> tuple[LinearConstraint, ...]:
    """Linear relations a family imposes on the coupled-mode coefficients."""
    if isinstance(family, str):
        family = PointGroupFamily.parse(family)
    if family not in _TABLES:
        raise ValueError(f"unsupported point-group family {family!r}")
    return _TABLES[family]


def constraint_matrix(family: PointGroupFamily | str) -> np.ndarray:
    """Rows of the constraint table as weight vectors over ``COEFF_NAMES``."""
    table = constraint_table(family)
    mat = np.zeros((len(table), len(COEFF_NAMES)))
    for i, c in enumerate(table):
        for name, w in c.weights:
            mat[i, COEFF_NAMES.index(name)] = w
    return mat


@dataclass(frozen=True)
class CMECoefficients:
    """Nonlinear and linear coefficients of the two-component coupled-mode equations.

    ``loss_x``/``loss_y`` are the power absorption coefficients; the complex
    linear parameters are ``xi_x = delta_beta + i loss_x`` and
    ``xi_y = -delta_beta + i loss_y``.  ``fwm=False`` drops the coherent
    ``u_k^2 u_j^*`` exchange term (high-birefringence averaging) while keeping
    the ``2 b_j |u_k|^2 u_j`` cross-phase term.
    """

    a_x: float = 0.0
    a_y: float = 0.0
    b_x: float = 0.0
    b_y: float = 0.0
    c_x: float = 0.0
    c_y: float = 0.0
    d_x: float = 0.0
    d_y: float = 0.0
    delta_beta: float = 0.0
    loss_x: float = 0.0
    loss_y: float = 0.0
    fwm: bool = True

    def __post_init__(self):
        for name in COEFF_NAMES + ("delta_beta", "loss_x", "loss_y"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"coefficient {name} must be finite, got {value!r}")
        if self.loss_x < 0 or self.loss_y < 0:
            raise ValueError("losses must be non-negative")

    @property
    def xi_x(self) -> complex:
        return complex(self.delta_beta, self.loss_x)

    @property
    def xi_y(self) -> complex:
        return complex(-self.delta_beta, self.loss_y)

    @property
    def lossless(self) -> bool:
        return self.loss_x == 0.0 and self.loss_y == 0.0

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in COEFF_NAMES])

    @classmethod
    def from_vector(cls, vec, **kwargs) -> "CMECoefficients":
        return cls(**dict(zip(COEFF_NAMES, map(float, vec))), **kwargs)

    @classmethod
    def isotropic(cls, gamma: float, **kwargs) -> "CMECoefficients":
        return cls(a_x=gamma, a_y=gamma, b_x=gamma / 3, b_y=gamma / 3, **kwargs)

    @classmethod
    def tetragonal(cls, a: float, b: float, c: float, d: float, **kwargs) -> "CMECoefficients":
        return cls(a_x=a, a_y=a, b_x=b, b_y=b, c_x=c, c_y=-c, d_x=d, d_y=-d, **kwargs)

    @classmethod
    def from_chi3(cls, chi, prefactor: float = 1.0, **kwargs) -> "CMECoefficients":
        """Reduce a transverse susceptibility table ``chi[j, k, l, m]`` (indices 0=x, 1=y).

        ``prefactor`` converts susceptibility to nonlinearity parameter (the
        overlap-integral factor of the guided mode).
        """
        g = prefactor * np.asarray(chi, dtype=float)
        if g.shape != (2, 2, 2, 2):
            raise ValueError(f"susceptibility table must have shape (2, 2, 2, 2), got {g.shape}")
        out = {}
        for j, tag in ((0, "x"), (1, "y")):
            k = 1 - j
            out[f"a_{tag}"] = g[j, j, j, j]
            out[f"b_{tag}"] = (g[j, j, k, k] + g[j, k, j, k] + g[j, k, k, j]) / 3
            out[f"c_{tag}"] = (g[j, j, k, j] + g[j, k, j, j] + g[j, j, j, k]) / 3
            out[f"d_{tag}"] = g[j, k, k, k]
        return cls(**{n: float(v) for n, v in out.items()}, **kwargs)

    def to_dict(self) -> dict:
        d = {n: getattr(self, n) for n in COEFF_NAMES}
        d.update(delta_beta=self.delta_beta, loss_x=self.loss_x, loss_y=self.loss_y, fwm=self.fwm)
        return d


def family_membership(family, coeffs: CMECoefficients) -> list[str]:
    """Labels of family constraints the coefficients violate (empty if in-family)."""
    return [c.label for c in constraint_table(family) if not c.holds(coeffs)]


@dataclass(frozen=True)
class GateVerdict:
    passed: bool
    violated: tuple[str, ...] = ()
    hamiltonian: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"verdict": "pass" if self.passed else "fail", "violated": list(self.violated)}
        if self.passed:
            out["hamiltonian"] = self.hamiltonian
        return out


def _gate_conditions(coeffs):
    def pair(label, lhs, rhs):
        return label, lhs - rhs, max(abs(lhs), abs(rhs))

    return (
        pair("b_x = b_y", coeffs.b_x, coeffs.b_y),
        pair("d_y = c_x", coeffs.d_y, coeffs.c_x),
        pair("d_x = c_y", coeffs.d_x, coeffs.c_y),
    )


def hamiltonian_form_check(coeffs: CMECoefficients) -> GateVerdict:
    """Decide whether the coupled-mode equations derive from a real Hamiltonian.

    Passes iff ``b_x = b_y``, ``d_y = c_x`` and ``d_x = c_y`` and the fibre is
    lossless.  On a pass the coefficients of the quartic Hamiltonian are
    returned as well.
    """
    violated = [label for label, r, s in _gate_conditions(coeffs) if not _close_to_zero(r, s)]
    if not coeffs.lossless:
        violated.append("loss_x = loss_y = 0")
    if violated:
        return GateVerdict(False, tuple(violated))
    b = 0.5 * (coeffs.b_x + coeffs.b_y)
    ham = {
        "xi_x": coeffs.xi_x.real,
        "xi_y": coeffs.xi_y.real,
        "a_x": coeffs.a_x,
        "a_y": coeffs.a_y,
        "b": b,
        "c_x": coeffs.c_x,
        "c_y": coeffs.c_y,
        "fwm": coeffs.fwm,
    }
    return GateVerdict(True, (), ham)


@dataclass(frozen=True)
class SpinHamiltonianCoeffs:
    """Stokes-space form ``-1/2 {dB Sz + c0 S0^2 + cz Sz^2 + cx Sx^2 + 2 c Sz Sx + ...}``.

    ``lin_z`` and ``lin_x`` multiply ``S0*Sz`` and ``S0*Sx``; they vanish for
    every symmetry class with ``a_x = a_y`` and ``c_x = -c_y``.  ``fwm=False``
    marks the averaged model without the coherent exchange term, which removes
    ``(b/2)(Sx^2 - Sy^2)`` from the bracket.
    """

    c0: float
    cz: float
    cx: float
    c_cross: float
    delta_beta: float
    lin_z: float = 0.0
    lin_x: float = 0.0
    fwm: bool = True

    def stokes_value(self, s0, sx, sy, sz):
        """Hamiltonian density in terms of Stokes components."""
        quad = self.c0 * s0**2 + self.cz * sz**2 + self.cx * sx**2 + 2.0 * self.c_cross * sz * sx
        if not self.fwm:
            quad = quad - 0.5 * self.cx * (sx**2 - sy**2)
        lin = self.delta_beta * sz + self.lin_z * s0 * sz + self.lin_x * s0 * sx
        return -0.5 * (lin + quad)

    def to_dict(self) -> dict:
        return {
            "c0": self.c0,
            "cz": self.cz,
            "cx": self.cx,
            "c_cross": self.c_cross,
            "delta_beta": self.delta_beta,
            "lin_z": self.lin_z,
            "lin_x": self.lin_x,
        }


def build_spin_hamiltonian(coeffs: CMECoefficients) -> SpinHamiltonianCoeffs:
    """Stokes-space Hamiltonian coefficients; refuses sets that fail the gate."""
    verdict = hamiltonian_form_check(coeffs)
    if not verdict.passed:
        raise ValueError("coefficients admit no Hamiltonian form: " + "; ".join(verdict.violated))
    a = 0.5 * (coeffs.a_x + coeffs.a_y)
    b = 0.5 * (coeffs.b_x + coeffs.b_y)
    return SpinHamiltonianCoeffs(
        c0=0.5 * (a + b),
        cz=0.5 * (a - b),
        cx=b,
        c_cross=0.5 * (coeffs.c_x - coeffs.c_y),
        delta_beta=coeffs.delta_beta,
        lin_z=0.5 * (coeffs.a_x - coeffs.a_y),
        lin_x=coeffs.c_x + coeffs.c_y,
        fwm=coeffs.fwm,
    )


def homogeneous_hamiltonian_value(coeffs: CMECoefficients, ux, uy):
    """Phase-invariant quartic Hamiltonian of the CW coupled-mode equations.

    Works elementwise on arrays.  Requires a passing gate.
    """
    verdict = hamiltonian_form_check(coeffs)
    if not verdict.passed:
        raise ValueError("coefficients admit no Hamiltonian form: " + "; ".join(verdict.violated))
    h = verdict.hamiltonian
    ux = np.asarray(ux, dtype=complex)
    uy = np.asarray(uy, dtype=complex)
    px, py = np.abs(ux) ** 2, np.abs(uy) ** 2
    mix = 2.0 * (ux * np.conj(uy)).real
    value = (
        0.5 * h["xi_x"] * px
        + 0.5 * h["xi_y"] * py
        + 0.5 * h["a_x"] * px**2
        + 0.5 * h["a_y"] * py**2
        + 2.0 * h["b"] * px * py
        + (h["c_x"] * px + h["c_y"] * py) * mix
    )
    if h["fwm"]:
        value = value + h["b"] * ((ux * np.conj(uy)) ** 2).real
    value = -value
    return float(value) if value.ndim == 0 else value


def generic_member(family, rng: np.random.Generator, **kwargs) -> CMECoefficients:
    """Random coefficient set satisfying exactly the family's constraints."""
    mat = constraint_matrix(family)
    if mat.shape[0] == 0:
        return CMECoefficients.from_vector(rng.normal(size=len(COEFF_NAMES)), **kwargs)
    _, sv, vt = np.linalg.svd(mat)
    rank = int((sv > 1e-12).sum())
    basis = vt[rank:]
    vec = rng.normal(size=basis.shape[0]) @ basis
    vec[np.abs(vec) < 1e-12] = 0.0
    return CMECoefficients.from_vector(vec, **kwargs)


def with_coefficients(coeffs: CMECoefficients, **changes) -> CMECoefficients:
    return replace(coeffs, **changes)
