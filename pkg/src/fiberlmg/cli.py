"""Command-line interface.

Exit codes: 0 success, 2 schema error, 3 domain or regime error, 4 numerical
quality warning raised to an error by ``--strict`` (or a failed selftest).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import jsonschema
import numpy as np

from . import acceptance
from .dynamics import (
    Branch,
    DriftError,
    EnergyOutOfBoundsError,
    InfinitePeriodError,
    analytic_trajectory,
    numeric_trajectory,
    phase_align,
    trajectory_params,
)
from .fiber import (
    DEFAULT_N1,
    BelowCutoffError,
    FiberGeometry,
    FieldGrid,
    PropagationParams,
    cutoff_wavelength,
    effective_area,
    gamma_parameter,
    length_scales,
    lp01_solve,
    single_mode_check,
    split_step_propagate,
    write_field_dump,
)
from .hamiltonian import (
    DegenerateRegimeError,
    QuadraticSpinHamiltonian,
    Regime,
    energy_bounds,
    fixed_points,
    hamiltonian_eval,
    reduce_to_principal_axes,
)
from .symmetry import (
    COEFF_NAMES,
    POINT_GROUPS,
    CMECoefficients,
    PointGroupFamily,
    build_spin_hamiltonian,
    constraint_table,
    family_membership,
    hamiltonian_form_check,
    homogeneous_hamiltonian_value,
)

EXIT_OK, EXIT_SCHEMA, EXIT_DOMAIN, EXIT_QUALITY = 0, 2, 3, 4


class SchemaError(ValueError):
    pass


class DomainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# schemas

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}


def _obj(properties, required=()):
    return {"type": "object", "properties": properties, "required": list(required), "additionalProperties": False}


_COEFFS = _obj(
    {**{n: _NUM for n in COEFF_NAMES}, "delta_beta": _NUM, "loss_x": _NONNEG, "loss_y": _NONNEG, "fwm": {"type": "boolean"}}
)
_CHI3 = {"type": "array", "minItems": 2, "maxItems": 2, "items": {
    "type": "array", "minItems": 2, "maxItems": 2, "items": {
        "type": "array", "minItems": 2, "maxItems": 2, "items": {
            "type": "array", "minItems": 2, "maxItems": 2, "items": _NUM}}}}
_VEC3 = {"type": "array", "items": _NUM, "minItems": 3, "maxItems": 3}
_HAM = {"alpha": _NUM, "beta": _NUM, "gamma": _NUM}
_SWEEP_INNER = _obj(
    {"parameter": {"enum": ["alpha", "beta", "gamma", "H"]}, "start": _NUM, "stop": _NUM, "count": {"type": "integer", "minimum": 1}},
    ("parameter", "start", "stop", "count"),
)
_SWEEP = _obj({**_SWEEP_INNER["properties"], "inner": _SWEEP_INNER}, ("parameter", "start", "stop", "count"))
_GEOMETRY = _obj({"a": _POS, "n1": _POS, "nc": _POS, "delta_n": _POS, "lambda0": _POS}, ("a", "lambda0"))

SCHEMAS = {
    "classify": _obj(
        {
            "family": {"type": "string"},
            "coefficients": _COEFFS,
            "chi3": _CHI3,
            "prefactor": _NUM,
            "delta_beta": _NUM,
        },
        ("family",),
    ),
    "reduce": _obj(_HAM, ("alpha", "beta", "gamma")),
    "simulate": _obj(
        {
            **_HAM,
            "field": _VEC3,
            "initial": _VEC3,
            "energy": _NUM,
            "orbit": {"type": "array", "items": {"enum": [-1, 1]}, "minItems": 2, "maxItems": 2},
            "phase": _NUM,
            "t_end": _NONNEG,
            "dt": _POS,
            "sample_every": {"type": "integer", "minimum": 1},
            "mode": {"enum": ["analytic", "numeric", "both"]},
            "renormalize": {"type": "boolean"},
            "tolerance": _POS,
        },
        ("alpha", "beta", "gamma", "t_end", "dt"),
    ),
    "portrait": _obj({**_HAM, "sweep": _SWEEP, "samples": {"type": "integer", "minimum": 2}, "workers": {"type": "integer", "minimum": 1}},
                     ("alpha", "beta", "gamma", "sweep")),
    "propagate": _obj(
        {
            "geometry": _GEOMETRY,
            "coefficients": _COEFFS,
            "grid": _obj({"n": {"type": "integer", "minimum": 2}, "dtau": _POS}, ("n", "dtau")),
            "propagation": _obj(
                {"beta2": _NUM, "beta2_y": _NUM, "dz": _POS, "z_end": _NONNEG, "checkpoints": {"type": "integer", "minimum": 1}},
                ("dz", "z_end"),
            ),
            "input_field": _obj(
                {"shape": {"enum": ["cw", "gaussian", "sech"]}, "power_x": _NONNEG, "power_y": _NONNEG, "phase_y": _NUM, "t0": _POS},
                ("shape",),
            ),
            "dump": {"type": "string"},
            "drift_tolerance": _POS,
        },
        ("coefficients", "grid", "propagation", "input_field"),
    ),
    "fibermode": _obj(
        {
            "geometry": _GEOMETRY,
            "chi3_xxxx": _NUM,
            "pulse": _obj({"P0": _NONNEG, "T0": _NONNEG, "beta2": _NUM, "delta_beta": _NUM, "length": _POS}),
        },
        ("geometry",),
    ),
    "selftest": _obj({}),
}


def _reject_constant(name):
    raise SchemaError(f"non-finite number {name} is not allowed")


def load_config(command: str, text: str | None) -> dict:
    """Parse and validate a JSON config; unknown keys and non-finite numbers are schema errors."""
    if text is None:
        data = {}
    else:
        try:
            data = json.loads(text, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
    _check_finite(data, "$")
    try:
        jsonschema.validate(data, SCHEMAS[command])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "$"
        raise SchemaError(f"{where}: {exc.message}") from None
    return data


def _check_finite(obj, path):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise SchemaError(f"{path}: non-finite number")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _check_finite(v, f"{path}/{k}")
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            _check_finite(v, f"{path}/{i}")


# ---------------------------------------------------------------------------
# output helpers


def fmt(value) -> str:
    """17 significant digits, C locale, empty string for missing values."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


@dataclass
class Table:
    columns: list[str]
    rows: list[list]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [[_jsonable(v) for v in row] for row in self.rows]
        return json.dumps({"columns": self.columns, "rows": rows}, indent=2) + "\n"


def _jsonable(v):
    """Plain JSON types; non-finite floats become the strings ``inf``, ``-inf`` and ``nan``."""
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(result, fmt_name: str) -> str:
    if isinstance(result, Table):
        return result.to_csv() if fmt_name == "csv" else result.to_json()
    if fmt_name == "json":
        return json.dumps(_jsonable(result), indent=2, allow_nan=False) + "\n"
    return Table(["key", "value"], [list(kv) for kv in _flatten(_jsonable(result))]).to_csv()


# ---------------------------------------------------------------------------
# commands


class Run:
    """Per-invocation state: collected numerical-quality warnings."""

    def __init__(self):
        self.warnings: list[str] = []

    def warn(self, message: str):
        self.warnings.append(message)


def _coefficients(cfg: dict, delta_beta=None) -> CMECoefficients:
    kwargs = dict(cfg)
    if delta_beta is not None:
        kwargs["delta_beta"] = delta_beta
    return CMECoefficients(**kwargs)


def cmd_classify(cfg: dict, run: Run):
    try:
        family = PointGroupFamily.parse(cfg["family"])
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    if ("coefficients" in cfg) == ("chi3" in cfg):
        raise SchemaError("give exactly one of 'coefficients' or 'chi3'")
    if "chi3" in cfg:
        coeffs = CMECoefficients.from_chi3(cfg["chi3"], cfg.get("prefactor", 1.0), delta_beta=cfg.get("delta_beta", 0.0))
    else:
        if "prefactor" in cfg or "delta_beta" in cfg:
            raise SchemaError("'prefactor' and top-level 'delta_beta' only apply with 'chi3'")
        coeffs = _coefficients(cfg["coefficients"])
    verdict = hamiltonian_form_check(coeffs)
    report = {
        "family": family.value,
        "point_groups": list(POINT_GROUPS[family]),
        "constraints": [c.label for c in constraint_table(family)],
        "coefficients": coeffs.to_dict(),
        "family_violations": family_membership(family, coeffs),
        "gate": verdict.to_dict(),
    }
    if verdict.passed:
        report["spin_hamiltonian"] = build_spin_hamiltonian(coeffs).to_dict()
    else:
        report["note"] = "no Hamiltonian form: raw numerical integration only (non-conservative)"
    return report


def _hamiltonian(cfg) -> QuadraticSpinHamiltonian:
    return QuadraticSpinHamiltonian(cfg["alpha"], cfg["beta"], cfg["gamma"], tuple(cfg.get("field", (0.0, 0.0, 0.0))))


def cmd_reduce(cfg: dict, run: Run):
    h = _hamiltonian(cfg)
    p = reduce_to_principal_axes(h)
    report = {"hamiltonian": h.to_dict(), "top": p.to_dict()}
    if p.regime is Regime.Degenerate:
        report["note"] = "alpha*gamma == beta^2: one principal inertia is infinite; no trajectory formulas"
        return report
    report["energy_bounds"] = energy_bounds(p).to_dict()
    report["fixed_points"] = [fp.to_dict() for fp in fixed_points(p)]
    return report


def cmd_simulate(cfg: dict, run: Run):
    h = _hamiltonian(cfg)
    mode = cfg.get("mode", "analytic")
    t_end, dt = cfg["t_end"], cfg["dt"]
    every = cfg.get("sample_every", 1)
    p = reduce_to_principal_axes(h)
    if ("initial" in cfg) == ("energy" in cfg):
        raise SchemaError("give exactly one of 'initial' or 'energy'")

    need_analytic = mode in ("analytic", "both")
    if need_analytic and h.has_field:
        raise DomainError("closed-form trajectories need a zero linear field; use mode 'numeric'")
    if p.regime is Regime.Degenerate and (need_analytic or "energy" in cfg):
        raise DomainError(f"degenerate regime (alpha*gamma == beta^2): {p.to_dict()}")

    if "energy" in cfg:
        H = cfg["energy"]
        orbit = tuple(cfg.get("orbit", (1, 1)))
        phase = cfg.get("phase", 0.0)
        try:
            tp = trajectory_params(p, H)
        except EnergyOutOfBoundsError:
            b = energy_bounds(p)
            raise DomainError(f"H={H!r} outside the energy bounds [{b.H_min!r}, {b.H_max!r}]") from None
        s0 = analytic_trajectory(p, H, 0.0, orbit, phase)
    else:
        s0 = np.asarray(cfg["initial"], dtype=float)
        nrm = float(np.linalg.norm(s0))
        if nrm == 0.0:
            raise DomainError("initial spin vector must be non-zero")
        if abs(nrm - 1.0) > 1e-12:
            run.warn(f"initial vector normalised (|s| was {nrm!r})")
            s0 = s0 / nrm
        tp = None
        if p.regime is not Regime.Degenerate and not h.has_field:
            _, orbit, phase = phase_align(p, s0)
            H = hamiltonian_eval(h, s0)
            tp = trajectory_params(p, H)

    if tp is not None and tp.branch in (Branch.Separatrix, Branch.Heteroclinic):
        if need_analytic:
            raise DomainError("separatrix energy: the period is infinite; analytic mode refused (use mode 'numeric')")
        run.warn("separatrix energy: numeric run approaches the saddle points asymptotically")

    n_steps = int(round(t_end / dt))
    t = np.arange(0, n_steps + 1, every) * dt
    if n_steps % every:
        t = np.append(t, n_steps * dt)
    rows = []
    ana = num = None
    if need_analytic:
        ana = analytic_trajectory(p, H, t, orbit, phase)
    if mode in ("numeric", "both"):
        nt = numeric_trajectory(h, s0 / np.linalg.norm(s0), n_steps * dt, dt, renormalize=cfg.get("renormalize", False))
        num = nt.s[np.round(t / dt).astype(int)]
        tol = cfg.get("tolerance")
        if tol is not None and max(nt.max_norm_drift, nt.max_energy_drift) > tol:
            run.warn(f"integrator drift |S|^2 {nt.max_norm_drift:.3e}, H {nt.max_energy_drift:.3e} exceeds tolerance {tol:.3e}")

    def row(ti, s, *extra):
        return [ti, s[0], s[1], s[2], hamiltonian_eval(h, s), float(s @ s) - 1.0, *extra]

    if mode == "both":
        dev = np.abs(ana - num).max(axis=1)
        for i, ti in enumerate(t):
            rows.append([*row(ti, ana[i]), "analytic", dev[i]])
            rows.append([*row(ti, num[i]), "numeric", dev[i]])
        cols = ["t", "Sx", "Sy", "Sz", "H", "norm_error", "source", "deviation"]
    else:
        traj = ana if mode == "analytic" else num
        rows = [row(ti, traj[i]) for i, ti in enumerate(t)]
        cols = ["t", "Sx", "Sy", "Sz", "H", "norm_error"]
    return Table(cols, rows)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    count: int
    inner: "SweepSpec | None" = None

    @classmethod
    def from_dict(cls, d: dict, depth: int = 0) -> "SweepSpec":
        if d["start"] > d["stop"]:
            raise SchemaError(f"sweep over {d['parameter']}: start must not exceed stop")
        inner = cls.from_dict(d["inner"], depth + 1) if "inner" in d else None
        if inner is not None and inner.parameter == d["parameter"]:
            raise SchemaError("nested sweeps must vary different parameters")
        return cls(d["parameter"], d["start"], d["stop"], d["count"], inner)

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]

    def points(self) -> list[dict]:
        out = []
        for v in self.values():
            if self.inner is None:
                out.append({self.parameter: v})
            else:
                out.extend({self.parameter: v, **q} for q in self.inner.points())
        return out


_ORBIT_SETS = {
    Branch.EllipticLow: ((1, 1), (1, -1)),
    Branch.EllipticHigh: ((1, 1), (-1, 1)),
    Branch.HyperbolicPos: ((1, 1), (-1, 1)),
    Branch.HyperbolicNeg: ((1, 1), (1, -1)),
    Branch.Separatrix: ((1, 1), (-1, 1), (-1, -1), (1, -1)),
    Branch.Heteroclinic: ((1, 1), (-1, 1), (-1, -1), (1, -1)),
}


def _portrait_point(point: dict, samples: int):
    h = QuadraticSpinHamiltonian(point["alpha"], point["beta"], point["gamma"])
    p = reduce_to_principal_axes(h)
    if p.regime is Regime.Degenerate:
        raise DomainError(f"degenerate regime at {point}: {p.to_dict()}")
    H = point["H"]
    b = energy_bounds(p)
    base = [point["alpha"], point["beta"], point["gamma"], H]
    if not b.contains(H, strict=True):
        return [[*base, False, "", "", "", None, None, None]]
    tp = trajectory_params(p, H)
    rows = []
    for oid, orbit in enumerate(_ORBIT_SETS[tp.branch]):
        if tp.branch in (Branch.Separatrix, Branch.Heteroclinic):
            u = np.linspace(-12.0, 12.0, samples)
            t = u / tp.rate
        else:
            t = np.linspace(0.0, tp.period, samples, endpoint=False)
        s = analytic_trajectory(p, H, t, orbit)
        for i, si in enumerate(s):
            rows.append([*base, True, tp.branch.value, oid, i, si[0], si[1], si[2]])
    return rows


def cmd_portrait(cfg: dict, run: Run):
    sweep = SweepSpec.from_dict(cfg["sweep"])
    params = [sweep.parameter] + ([sweep.inner.parameter] if sweep.inner else [])
    if "H" not in params:
        raise SchemaError("portrait sweeps must include the energy parameter 'H'")
    fixed = {k: cfg[k] for k in ("alpha", "beta", "gamma")}
    points = [{**fixed, **pt} for pt in sweep.points()]
    probe = reduce_to_principal_axes(QuadraticSpinHamiltonian(fixed["alpha"], fixed["beta"], fixed["gamma"]))
    if probe.regime is Regime.Degenerate and not (set(params) & {"alpha", "beta", "gamma"}):
        raise DomainError(f"degenerate regime: {probe.to_dict()}")
    samples = cfg.get("samples", 200)
    # points are independent; map() keeps sweep order regardless of completion order
    with ThreadPoolExecutor(max_workers=cfg.get("workers", 4)) as pool:
        chunks = list(pool.map(lambda pt: _portrait_point(pt, samples), points))
    rows = [r for chunk in chunks for r in chunk]
    cols = ["alpha", "beta", "gamma", "H", "exists", "branch", "orbit", "index", "Sx", "Sy", "Sz"]
    return Table(cols, rows)


def _geometry(g: dict) -> FiberGeometry:
    n1 = g.get("n1", DEFAULT_N1)
    if ("nc" in g) == ("delta_n" in g):
        raise SchemaError("geometry needs exactly one of 'nc' and 'delta_n'")
    nc = g["nc"] if "nc" in g else n1 - g["delta_n"]
    return FiberGeometry(g["a"], n1, nc, g["lambda0"])


def cmd_propagate(cfg: dict, run: Run):
    coeffs = _coefficients(cfg["coefficients"])
    grid_cfg, prop, inp = cfg["grid"], cfg["propagation"], cfg["input_field"]
    grid = FieldGrid.from_shape(
        grid_cfg["n"], grid_cfg["dtau"], inp["shape"], inp.get("power_x", 1.0), inp.get("power_y", 0.0), inp.get("phase_y", 0.0), inp.get("t0", 1.0)
    )
    params = PropagationParams(prop.get("beta2", 0.0), coeffs, prop["dz"], prop["z_end"], prop.get("beta2_y"))
    summary = {}
    if "geometry" in cfg:
        geom = _geometry(cfg["geometry"])
        summary["V"] = geom.V
        summary["single_mode"] = single_mode_check(geom).single_mode
    peak = int(np.argmax(np.abs(grid.ux) ** 2 + np.abs(grid.uy) ** 2))
    res = split_step_propagate(grid, params, checkpoints=prop.get("checkpoints", 100), return_history=True, track_index=peak)
    tol = cfg.get("drift_tolerance", 1e-6)
    if coeffs.lossless:
        p0, p1 = grid.total_power, res.grid.total_power
        if p0 > 0 and abs(p1 - p0) / p0 > tol:
            run.warn(f"power drift {abs(p1 - p0) / p0:.3e} (relative) exceeds {tol:.3e}")
    # the quartic Hamiltonian is conserved pointwise only without dispersion
    if coeffs.lossless and hamiltonian_form_check(coeffs).passed and params.beta2 == 0.0 and params.beta2_y in (None, 0.0):
        h0 = homogeneous_hamiltonian_value(coeffs, grid.ux[peak], grid.uy[peak])
        h1 = homogeneous_hamiltonian_value(coeffs, res.grid.ux[peak], res.grid.uy[peak])
        rel = abs(h1 - h0) / max(abs(h0), np.finfo(float).tiny)
        if rel > tol:
            run.warn(f"Hamiltonian drift {rel:.3e} (relative) exceeds {tol:.3e}")
    if "dump" in cfg:
        write_field_dump(cfg["dump"], res.grid)
        summary["dump"] = cfg["dump"]
    summary["final_energy"] = res.grid.total_power
    run.summary = summary

    rows = [[z, *st, ph] for z, st, ph in zip(res.z, res.stokes, res.dphi)]
    return Table(["z", "S0", "Sx", "Sy", "Sz", "dphi"], rows)


def cmd_fibermode(cfg: dict, run: Run):
    geom = _geometry(cfg["geometry"])
    check = single_mode_check(geom)
    report = {
        "geometry": geom.to_dict(),
        "V": check.V,
        "single_mode": check.single_mode,
        "cutoff_wavelength": cutoff_wavelength(geom.a, geom.n1, geom.nc),
    }
    try:
        mode = lp01_solve(geom)
    except BelowCutoffError as exc:
        raise DomainError(str(exc)) from None
    report["lp01"] = mode.to_dict()
    report["continuity_residual"] = mode.residual()
    report["effective_area"] = effective_area(mode)
    chi3 = cfg.get("chi3_xxxx", 0.0)
    gamma = gamma_parameter(geom, chi3, mode)
    report["gamma"] = gamma
    if "pulse" in cfg:
        pl = cfg["pulse"]
        ls = length_scales(pl.get("P0", 0.0), pl.get("T0", 0.0), pl.get("beta2", 0.0), pl.get("delta_beta", 0.0), gamma)
        report["length_scales"] = ls.to_dict()
        if "length" in pl:
            report["advisories"] = ls.advisories(pl["length"])
    return report


def cmd_selftest(cfg: dict, run: Run):
    results = acceptance.run_all(echo=lambda line: print(line, file=sys.stderr))
    run.selftest_failed = not all(r.passed for r in results)
    return Table(["criterion", "name", "passed", "detail", "seconds"], [[r.number, r.name, r.passed, r.detail, r.seconds] for r in results])


COMMANDS = {
    "classify": (cmd_classify, "json"),
    "reduce": (cmd_reduce, "json"),
    "simulate": (cmd_simulate, "csv"),
    "portrait": (cmd_portrait, "csv"),
    "propagate": (cmd_propagate, "csv"),
    "fibermode": (cmd_fibermode, "json"),
    "selftest": (cmd_selftest, "csv"),
}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="JSON configuration file ('-' for stdin)")
    common.add_argument("--output", default=argparse.SUPPRESS, help="write the result here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    common.add_argument("--strict", action="store_true", default=argparse.SUPPRESS, help="turn numerical-quality warnings into exit code 4")
    parser = argparse.ArgumentParser(prog="fiberlmg", description="Classical LMG spin dynamics in nonlinear fibres.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "classify": "symmetry-family constraints and Hamiltonian-form verdict",
        "reduce": "principal-axis reduction, energy bounds, fixed points",
        "simulate": "spin trajectory (analytic, numeric or both)",
        "portrait": "orbit samples over an energy sweep",
        "propagate": "coupled-mode field propagation",
        "fibermode": "LP01 mode, nonlinearity parameter, length scales",
        "selftest": "run the acceptance suite",
    }
    for name, text in helps.items():
        sub.add_parser(name, help=text, parents=[common])
    return parser


def _error(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    func, default_format = COMMANDS[command]
    out_format = getattr(args, "format", default_format)
    strict = getattr(args, "strict", False)
    config_path = getattr(args, "config", None)

    try:
        if config_path is None:
            if command != "selftest":
                raise SchemaError("--config is required for this command")
            text = None
        elif config_path == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(config_path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise SchemaError(f"cannot read config: {exc}") from None
        cfg = load_config(command, text)
        run = Run()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            result = func(cfg, run)
        for w in caught:
            if issubclass(w.category, (RuntimeWarning, UserWarning)):
                run.warn(f"{w.category.__name__}: {w.message}")
    except SchemaError as exc:
        return _error("schema", str(exc), EXIT_SCHEMA)
    except (DomainError, DegenerateRegimeError, EnergyOutOfBoundsError, InfinitePeriodError, BelowCutoffError, DriftError) as exc:
        return _error("domain", str(exc), EXIT_DOMAIN)
    except (ValueError, TypeError) as exc:
        return _error("domain", str(exc), EXIT_DOMAIN)

    text_out = render(result, out_format)
    output = getattr(args, "output", None)
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text_out)
    else:
        sys.stdout.write(text_out)

    status = {"status": "ok", "warnings": run.warnings}
    if getattr(run, "summary", None):
        status["summary"] = _jsonable(run.summary)
    if run.warnings or getattr(run, "summary", None):
        print(json.dumps(status), file=sys.stderr)
    if getattr(run, "selftest_failed", False):
        return EXIT_QUALITY
    if strict and run.warnings:
        return EXIT_QUALITY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
