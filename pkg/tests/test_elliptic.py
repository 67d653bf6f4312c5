import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fiberlmg.elliptic import (
    EllipticModulus,
    ThetaIndex,
    complete_elliptic_K,
    default_theta_truncation,
    jacobi_amplitude_inverse,
    jacobi_aux,
    jacobi_sn_cn_dn,
    quarter_periods,
    sn_cn_dn_via_theta,
    theta,
)

from goldens import AUX_07_08, K_HALF, SNCNDN_03_05, THETA00_02_I

moduli = st.floats(0.0, 0.999)
args = st.floats(-20.0, 20.0)


def test_K_at_zero_is_half_pi():
    assert complete_elliptic_K(0.0) == pytest.approx(math.pi / 2, abs=1e-16)


def test_K_golden():
    assert complete_elliptic_K(0.5) == pytest.approx(K_HALF, rel=1e-13)


def test_K_grows_towards_unit_modulus():
    vals = [complete_elliptic_K(1 - 10.0**-n) for n in range(2, 9)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("k", [-0.1, 1.0, 1.5, math.nan])
def test_K_domain(k):
    with pytest.raises(ValueError):
        complete_elliptic_K(k)


def test_modulus_complement():
    m = EllipticModulus.from_k(0.6)
    assert m.k**2 + m.kprime**2 == pytest.approx(1.0, abs=1e-14)
    qp = quarter_periods(0.6)
    assert qp.Kprime == pytest.approx(complete_elliptic_K(0.8), rel=1e-14)


def test_sncndn_golden():
    assert jacobi_sn_cn_dn(0.3, 0.5) == pytest.approx(SNCNDN_03_05, abs=1e-14)


def test_circular_and_hyperbolic_limits():
    u = 0.77
    assert jacobi_sn_cn_dn(u, 0.0) == pytest.approx((math.sin(u), math.cos(u), 1.0), abs=1e-15)
    sn, cn, dn = jacobi_sn_cn_dn(u, 1.0)
    assert abs(sn - math.tanh(u)) < 1e-14
    assert abs(cn - 1 / math.cosh(u)) < 1e-14
    assert abs(dn - 1 / math.cosh(u)) < 1e-14


def test_reciprocal_modulus():
    u, k = 0.4, 1.7
    sn, cn, dn = jacobi_sn_cn_dn(u, k)
    s1, c1, d1 = jacobi_sn_cn_dn(k * u, 1 / k)
    assert (sn, cn, dn) == pytest.approx((s1 / k, d1, c1), abs=1e-13)


def test_sncndn_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_sn_cn_dn(math.inf, 0.5)
    with pytest.raises(ValueError):
        jacobi_sn_cn_dn(0.1, -0.5)


def test_sncndn_vectorised_matches_scalar():
    u = np.linspace(-5, 5, 11)
    sn, cn, dn = jacobi_sn_cn_dn(u, 0.7)
    for i, ui in enumerate(u):
        assert (sn[i], cn[i], dn[i]) == pytest.approx(jacobi_sn_cn_dn(float(ui), 0.7), abs=1e-15)


def test_aux_golden_and_limits():
    assert jacobi_aux(0.7, 0.8) == pytest.approx(AUX_07_08, abs=1e-14)
    assert jacobi_aux(0.0, 0.3) == pytest.approx((1.0, 1.0, 0.0), abs=1e-16)
    u = 1.3
    assert jacobi_aux(u, 0.0) == pytest.approx((math.cos(u), 1.0, math.sin(u)), abs=1e-15)


@given(args, moduli)
def test_pythagorean_identities(u, k):
    sn, cn, dn = jacobi_sn_cn_dn(u, k)
    assert abs(sn * sn + cn * cn - 1) < 1e-12
    assert abs(dn * dn + k * k * sn * sn - 1) < 1e-12


@given(args, moduli)
def test_parity(u, k):
    sn, cn, dn = jacobi_sn_cn_dn(u, k)
    sn2, cn2, dn2 = jacobi_sn_cn_dn(-u, k)
    assert sn2 == pytest.approx(-sn, abs=1e-14)
    assert (cn2, dn2) == pytest.approx((cn, dn), abs=1e-14)


@given(st.floats(-5.0, 5.0), moduli)
def test_periods(u, k):
    K = complete_elliptic_K(k)
    sn, cn, dn = jacobi_sn_cn_dn(u, k)
    sn4, cn4, _ = jacobi_sn_cn_dn(u + 4 * K, k)
    _, _, dn2 = jacobi_sn_cn_dn(u + 2 * K, k)
    assert abs(sn4 - sn) < 1e-10 and abs(cn4 - cn) < 1e-10 and abs(dn2 - dn) < 1e-10


@pytest.mark.parametrize("k", [0.0, 0.3, 0.5, 0.9, 0.999])
def test_quarter_period_table(k):
    K = complete_elliptic_K(k)
    kp = math.sqrt(1 - k * k)
    assert jacobi_sn_cn_dn(0.0, k) == pytest.approx((0.0, 1.0, 1.0), abs=1e-12)
    assert jacobi_sn_cn_dn(K, k) == pytest.approx((1.0, 0.0, kp), abs=1e-12)


@given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0), moduli)
def test_amplitude_inverse_roundtrip(a, b, k):
    # any point of the unit circle is (sn, cn) of a unique argument in (-2K, 2K]
    r = math.hypot(a, b)
    if r < 1e-3:
        return
    u = jacobi_amplitude_inverse(a / r, b / r, k)
    sn, cn, _ = jacobi_sn_cn_dn(u, k)
    assert sn == pytest.approx(a / r, abs=1e-11) and cn == pytest.approx(b / r, abs=1e-11)


def test_theta_golden():
    val = theta(ThetaIndex(0, 0, 0.2, 1j))
    assert val.real == pytest.approx(THETA00_02_I, abs=1e-15)
    assert abs(val.imag) < 1e-15


def test_theta_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        theta(ThetaIndex(0, 0, 0.1, 0.5 - 0.1j))


def test_theta_truncation_bound():
    tau = 0.3 + 1.1j
    n = default_theta_truncation(tau)
    assert n <= 64
    assert math.exp(-math.pi * tau.imag * n * n) < 1e-16


@given(st.floats(0.1, 3.0))
def test_theta11_zero(im):
    assert abs(theta(ThetaIndex(1, 1, 0.0, complex(0.2, im)))) < 1e-14


@settings(max_examples=50)
@given(st.floats(-1.0, 1.0), st.floats(-0.5, 0.5), st.sampled_from([(0, 0), (0, 1), (1, 0), (1, 1)]))
def test_theta_quasi_periodicity(x, y, mn):
    mu, nu = mn
    tau = 0.3 + 1.1j
    z = complex(x, y)
    base = theta(ThetaIndex(mu, nu, z, tau))
    shifted = theta(ThetaIndex(mu, nu, z + 1, tau))
    assert abs(shifted - (-1) ** mu * base) < 1e-12
    # shift by tau picks up exp(-i pi tau - 2 i pi z) and the sign (-1)^nu
    lattice = theta(ThetaIndex(mu, nu, z + tau, tau))
    factor = (-1) ** nu * np.exp(-1j * math.pi * tau - 2j * math.pi * z)
    assert abs(lattice - factor * base) < 1e-12 * max(1.0, abs(lattice))


def test_theta_route_golden_cross_check():
    assert sn_cn_dn_via_theta(0.3, 0.5) == pytest.approx(SNCNDN_03_05, abs=1e-10)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9])
def test_theta_route_quarter_periods(k):
    K = complete_elliptic_K(k)
    assert sn_cn_dn_via_theta(0.0, k) == pytest.approx((0.0, 1.0, 1.0), abs=1e-12)
    assert sn_cn_dn_via_theta(K, k) == pytest.approx((1.0, 0.0, math.sqrt(1 - k * k)), abs=1e-10)


@given(st.floats(-10.0, 10.0), st.floats(0.01, 0.99))
def test_theta_route_matches_direct(u, k):
    assert sn_cn_dn_via_theta(u, k) == pytest.approx(jacobi_sn_cn_dn(u, k), abs=1e-10)
