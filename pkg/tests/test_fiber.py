import math
import struct
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberlmg.dynamics import numeric_trajectory, trajectory_through
from fiberlmg.fiber import (
    V_CUTOFF,
    AliasingWarning,
    BelowCutoffError,
    FiberGeometry,
    FieldGrid,
    PropagationParams,
    WeakGuidanceWarning,
    cutoff_wavelength,
    cw_evolve,
    effective_area,
    gamma_parameter,
    gaussian_linear_solution,
    high_birefringence_phases,
    length_scales,
    lmg_correspondence,
    lp01_solve,
    overlap_ratio,
    read_field_dump,
    single_mode_check,
    spin_frame,
    split_step_propagate,
    stokes_map,
    write_field_dump,
)
from fiberlmg.hamiltonian import Regime, reduce_to_principal_axes
from fiberlmg.symmetry import CMECoefficients, homogeneous_hamiltonian_value

from goldens import LP01_V20, LP01_V22

finite = st.floats(-10.0, 10.0)
complexes = st.builds(complex, finite, finite)


# --- Stokes map ----------------------------------------------------------------


def test_stokes_examples():
    r = 1 / math.sqrt(2)
    assert stokes_map(1.0, 0.0) == pytest.approx((1, 0, 0, 1))
    assert stokes_map(r, r) == pytest.approx((1, 1, 0, 0))
    # Sy = i(ux* uy - uy* ux) = i(i/2 + i/2) = -1
    assert stokes_map(r, 1j * r) == pytest.approx((1, 0, -1, 0))


@given(complexes, complexes)
def test_hopf_identity(ux, uy):
    s0, sx, sy, sz = stokes_map(ux, uy)
    assert abs(s0 * s0 - (sx * sx + sy * sy + sz * sz)) <= 1e-12 * max(s0 * s0, 1e-300)


def test_stokes_vectorised():
    rng = np.random.default_rng(0)
    ux = rng.normal(size=10_000) + 1j * rng.normal(size=10_000)
    uy = rng.normal(size=10_000) + 1j * rng.normal(size=10_000)
    s0, sx, sy, sz = stokes_map(ux, uy)
    assert np.max(np.abs(s0**2 - sx**2 - sy**2 - sz**2) / s0**2) < 1e-12


# --- CW propagation ------------------------------------------------------------


def test_high_birefringence_phase_law():
    gamma, px, py = 0.9, 0.7, 0.3
    tr = cw_evolve(CMECoefficients.isotropic(gamma, fwm=False), (math.sqrt(px), math.sqrt(py)), 5.0, 1e-3)
    phi_x, phi_y, dphi = high_birefringence_phases(gamma, px, py, tr.z)
    assert np.unwrap(np.angle(tr.ux)) == pytest.approx(phi_x, abs=1e-10)
    assert np.unwrap(np.angle(tr.uy)) == pytest.approx(phi_y, abs=1e-10)
    assert phi_x[-1] == pytest.approx(gamma * (px + 2 * py / 3) * 5.0)
    assert dphi[-1] == pytest.approx(gamma / 3 * (px - py) * 5.0)


def test_pure_self_phase_modulation():
    gamma, A = 1.3, 0.8
    tr = cw_evolve(CMECoefficients.isotropic(gamma), (A, 0.0), 4.0, 1e-3)
    assert np.abs(np.abs(tr.ux) - A).max() < 1e-13
    assert np.unwrap(np.angle(tr.ux)) == pytest.approx(gamma * A * A * tr.z, abs=1e-10)
    assert np.abs(tr.uy).max() == 0.0


def test_tetragonal_conservation_against_richardson():
    c = CMECoefficients.tetragonal(1.4, 0.6, 0.35, -0.35, delta_beta=0.8)
    u0 = (0.6 * np.exp(0.4j), 0.7 * np.exp(-1.2j))
    coarse = cw_evolve(c, u0, 2.0, 1e-3, sample_every=10)
    fine = cw_evolve(c, u0, 2.0, 5e-4, sample_every=20)
    ref_x = fine.ux + (fine.ux - coarse.ux) / 15
    ref_y = fine.uy + (fine.uy - coarse.uy) / 15
    h_ref = homogeneous_hamiltonian_value(c, ref_x, ref_y)
    h = homogeneous_hamiltonian_value(c, coarse.ux, coarse.uy)
    assert np.abs(h - h_ref).max() / 2.0 < 1e-9
    assert np.abs(h - h[0]).max() / 2.0 < 1e-9
    s0 = np.abs(coarse.ux) ** 2 + np.abs(coarse.uy) ** 2
    assert np.abs(s0 - s0[0]).max() < 1e-9


def test_lossy_power_decays_monotonically():
    c = CMECoefficients.isotropic(1.0, loss_x=0.05, loss_y=0.02)
    tr = cw_evolve(c, (0.8, 0.6j), 5.0, 1e-2)
    s0 = tr.stokes()[0]
    assert np.all(np.diff(s0) < 0)


@pytest.mark.parametrize(
    "coeffs",
    [
        CMECoefficients.isotropic(1.0),
        CMECoefficients.isotropic(2.5, delta_beta=0.7),
        CMECoefficients.tetragonal(1.5, 0.4, 0.3, -0.3, delta_beta=-0.4),
        CMECoefficients.isotropic(1.2, fwm=False),
    ],
)
def test_fiber_spin_correspondence(coeffs):
    u0 = (0.8 * np.exp(0.3j), 0.6 * np.exp(-1.1j))
    tr = cw_evolve(coeffs, u0, 6.0, 1e-3, sample_every=10)
    s = spin_frame(tr.stokes())
    h = lmg_correspondence(coeffs, 1.0)
    p = reduce_to_principal_axes(h)
    if h.has_field or p.regime is Regime.Degenerate:
        # no closed form: compare with the spin integrator instead
        ref = numeric_trajectory(h, s[0], 6.0, 1e-3, sample_every=10).s
    else:
        ref = trajectory_through(p, s[0], tr.z)
    assert np.abs(ref - s).max() < 1e-6


# --- split-step -----------------------------------------------------------------


def _flat(u0, n=16):
    return FieldGrid(n, 1.0, np.full(n, u0[0]), np.full(n, u0[1]))


def test_split_step_reduces_to_cw():
    c = CMECoefficients.tetragonal(1.2, 0.5, 0.2, -0.2)
    u0 = (0.8 * np.exp(0.3j), 0.5 * np.exp(-0.4j))
    out = split_step_propagate(_flat(u0), PropagationParams(0.0, c, 1e-3, 1.0))
    cw = cw_evolve(c, u0, 1.0, 1e-3)
    assert np.abs(out.ux - cw.ux[-1]).max() < 1e-10
    assert np.abs(out.uy - cw.uy[-1]).max() < 1e-10


def test_split_step_with_detuning_converges_at_second_order():
    c = CMECoefficients.tetragonal(1.2, 0.5, 0.2, -0.2, delta_beta=0.5)
    u0 = (0.8 * np.exp(0.3j), 0.5 * np.exp(-0.4j))
    ref = cw_evolve(c, u0, 1.0, 1e-4)
    errs = [np.abs(split_step_propagate(_flat(u0), PropagationParams(0.0, c, dz, 1.0)).ux - ref.ux[-1]).max() for dz in (0.02, 0.01)]
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_gaussian_dispersive_broadening():
    g = FieldGrid.from_shape(2048, 0.05, "gaussian", 1.0, 0.0, 0.0, 1.0)
    for beta2 in (-1.0, 0.5):
        out = split_step_propagate(g, PropagationParams(beta2, CMECoefficients(), 0.05, 2.0))
        assert np.abs(out.ux - gaussian_linear_solution(g.tau, 2.0, beta2, 1.0)).max() < 1e-8


def test_soliton_shape_preserved():
    g = FieldGrid.from_shape(1024, 0.05, "sech", 1.0, 0.0, 0.0, 1.0)
    z0 = math.pi / 2
    out = split_step_propagate(g, PropagationParams(-1.0, CMECoefficients.isotropic(1.0), z0 / 200, z0))
    assert np.abs(np.abs(out.ux) - np.abs(g.ux)).max() < 1e-3


def test_split_step_history_and_phase_tracking():
    c = CMECoefficients.isotropic(0.9, fwm=False)
    g = FieldGrid.from_shape(16, 1.0, "cw", 0.7, 0.3, 0.0, 1.0)
    res = split_step_propagate(g, PropagationParams(0.0, c, 1e-3, 2.0), checkpoints=4, return_history=True, track_index=3)
    assert list(res.z) == pytest.approx([0.0, 0.5, 1.0, 1.5, 2.0])
    assert res.stokes.shape == (5, 4)
    assert res.dphi == pytest.approx(high_birefringence_phases(0.9, 0.7, 0.3, res.z)[2], abs=1e-9)


def test_aliasing_warning():
    g = FieldGrid.from_shape(32, 1.0, "gaussian", 1.0, 0.0, 0.0, 0.4)
    with pytest.warns(AliasingWarning):
        split_step_propagate(g, PropagationParams(-1.0, CMECoefficients(), 0.01, 0.1))
    smooth = FieldGrid.from_shape(256, 0.1, "gaussian", 1.0, 0.0, 0.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error", AliasingWarning)
        split_step_propagate(smooth, PropagationParams(-1.0, CMECoefficients(), 0.01, 0.1))


def test_grid_validation():
    with pytest.raises(ValueError):
        FieldGrid(12, 1.0, np.zeros(12), np.zeros(12))
    with pytest.raises(ValueError):
        FieldGrid(8, 0.0, np.zeros(8), np.zeros(8))
    with pytest.raises(ValueError):
        PropagationParams(0.0, CMECoefficients(), -1e-3, 1.0)


def test_grid_frequency_axis():
    g = FieldGrid.from_shape(8, 0.5, "cw")
    assert g.omega == pytest.approx(2 * np.pi * np.array([0, 1, 2, 3, -4, -3, -2, -1]) / 4.0)


def test_field_dump_roundtrip(tmp_path):
    rng = np.random.default_rng(1)
    g = FieldGrid(8, 0.25, rng.normal(size=8) + 1j * rng.normal(size=8), rng.normal(size=8) + 1j * rng.normal(size=8))
    path = tmp_path / "field.cmef"
    write_field_dump(path, g)
    raw = path.read_bytes()
    assert raw[:4] == b"CMEF"
    assert struct.unpack("<IId", raw[4:20]) == (1, 8, 0.25)
    assert len(raw) == 20 + 2 * 8 * 16
    back = read_field_dump(path)
    assert np.array_equal(back.ux, g.ux) and np.array_equal(back.uy, g.uy)


# --- fibre mode ----------------------------------------------------------------

GEOM = dict(a=4e-6, n1=1.45, nc=1.445)


@pytest.mark.parametrize("gold", [LP01_V20, LP01_V22])
def test_lp01_goldens(gold):
    mode = lp01_solve(FiberGeometry(lambda0=gold["lambda0"], **GEOM))
    assert mode.U == pytest.approx(gold["U"], rel=1e-12)
    assert mode.n_e == pytest.approx(gold["n_e"], rel=1e-14)
    assert abs(mode.residual()) < 1e-10
    assert GEOM["nc"] < mode.n_e < GEOM["n1"]


def test_overlap_ratio_golden():
    mode = lp01_solve(FiberGeometry(lambda0=LP01_V22["lambda0"], **GEOM))
    assert overlap_ratio(mode) == pytest.approx(LP01_V22["ratio"], rel=1e-8)


def test_weak_guidance_limit():
    geom = FiberGeometry(0.2e-6, 1.45, 1.445, 1.55e-6)
    mode = lp01_solve(geom)
    assert geom.V < 0.2
    assert mode.n_e - geom.nc < 1e-3 * (geom.n1 - geom.nc)


def test_profile_is_continuous_at_core_edge():
    mode = lp01_solve(FiberGeometry(lambda0=1.55e-6, **GEOM))
    a = mode.a
    assert mode.profile(a * (1 - 1e-12)) == pytest.approx(mode.profile(a * (1 + 1e-12)), rel=1e-9)
    assert mode.profile(0.0) > 1.0 > mode.profile(2 * a)


def test_single_mode_threshold():
    base = FiberGeometry(lambda0=1.55e-6, **GEOM)
    flags = []
    for V in (2.404, 2.406):
        geom = base.with_wavelength(base.lambda0 * base.V / V)
        assert geom.V == pytest.approx(V, rel=1e-14)
        flags.append(single_mode_check(geom).single_mode)
    assert flags == [True, False]
    assert single_mode_check(FiberGeometry(1e-9, 1.45, 1.445, 1.55e-6)).single_mode


def test_cutoff_near_quoted_wavelength():
    lam = cutoff_wavelength(4e-6, 1.45, 1.445)
    assert abs(lam - 1.2e-6) / 1.2e-6 < 0.05
    geom = FiberGeometry(lambda0=lam, **GEOM)
    assert geom.V == pytest.approx(V_CUTOFF, rel=1e-14)


def test_geometry_validation_and_weak_guidance_warning():
    with pytest.raises(ValueError):
        FiberGeometry(4e-6, 1.44, 1.45, 1.55e-6)
    with pytest.warns(WeakGuidanceWarning):
        FiberGeometry(4e-6, 1.6, 1.45, 1.55e-6)


def test_below_cutoff_reported():
    # V = 0.02 puts the cladding decay constant near exp(-5000), beyond double range
    geom = FiberGeometry(0.02 * 1.55e-6 / (2 * math.pi * math.sqrt(1.45**2 - 1.445**2)), 1.45, 1.445, 1.55e-6)
    assert geom.V == pytest.approx(0.02)
    with pytest.raises(BelowCutoffError):
        lp01_solve(geom)


def test_gamma_parameter_linear_in_chi3():
    geom = FiberGeometry(lambda0=LP01_V22["lambda0"], **GEOM)
    mode = lp01_solve(geom)
    assert gamma_parameter(geom, 0.0, mode) == 0.0
    g1 = gamma_parameter(geom, 2e-22, mode)
    assert gamma_parameter(geom, 4e-22, mode) == pytest.approx(2 * g1, rel=1e-14)
    expect = 3 * geom.k0 / (8 * LP01_V22["n_e"]) * 2e-22 * LP01_V22["ratio"]
    assert g1 == pytest.approx(expect, rel=1e-8)
    with pytest.raises(ValueError):
        gamma_parameter(geom, 1e-22, None)


def test_effective_area_is_positive_and_sub_core_scale():
    mode = lp01_solve(FiberGeometry(lambda0=1.55e-6, **GEOM))
    area = effective_area(mode)
    assert math.pi * mode.a**2 < area < 20 * math.pi * mode.a**2


def test_length_scales_telecom_guidance():
    # T0 = 100 ps, beta2 = -20 ps^2/km: dispersion negligible below 50 km
    ls = length_scales(1e-3, 100e-12, -2e-26, 0.0, 2e-3)
    assert ls.L_D == pytest.approx(5e5)
    assert ls.L_NL > 50e3
    adv = ls.advisories(50e3)
    assert adv["dispersion_negligible"] and adv["nonlinearity_negligible"]
    assert ls.L_B == math.inf and ls.notes


def test_beat_length_shrinks_with_birefringence():
    assert length_scales(1, 1, 1, 1e12, 1).L_B < 1e-11
    assert length_scales(1, 1, 1, 2 * math.pi, 1).L_B == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 2.0), st.floats(0.0, 2 * math.pi))
def test_total_power_conserved_by_split_step(p, phase):
    g = FieldGrid.from_shape(64, 0.2, "sech", p, 0.5 * p, phase, 1.0)
    out = split_step_propagate(g, PropagationParams(-1.0, CMECoefficients.isotropic(1.0), 0.01, 0.5))
    # S0 drift budget of 1e-9 per unit length
    assert abs(out.total_power - g.total_power) / g.total_power < 1e-9 * 0.5
