"""Regenerate the frozen golden constants used by the test suite.

Every value here is produced by an extended-precision route that shares no
code with the package: mpmath AGM for K, Taylor-series ODE integration of the
sn/cn/dn system, direct theta-series summation, high-precision root finding of
the LP01 continuity condition and adaptive radial quadrature for the overlap
ratio.  Run with ``python tests/oracles/generate_goldens.py``; paste the output
into tests/goldens.py if anything changes.
"""

import mpmath as mp

mp.mp.dps = 40


def agm_K(k):
    kp = mp.sqrt(1 - k * k)
    return mp.pi / (2 * mp.agm(1, kp))


def sncndn_ode(u, k):
    # d(sn)/du = cn dn, d(cn)/du = -sn dn, d(dn)/du = -k^2 sn cn
    f = mp.odefun(
        lambda x, y: [y[1] * y[2], -y[0] * y[2], -k * k * y[0] * y[1]],
        0,
        [mp.mpf(0), mp.mpf(1), mp.mpf(1)],
        tol=mp.mpf(10) ** -30,
    )
    return f(u)


def theta_series(mu, nu, z, tau, trunc=50):
    total = mp.mpc(0)
    for n in range(-trunc, trunc + 1):
        m = n + mp.mpf(mu) / 2
        total += mp.exp(mp.pi * 1j * (tau * m * m + 2 * m * (z + mp.mpf(nu) / 2)))
    return total


def lp01_U(V):
    def f(U):
        W = mp.sqrt(V * V - U * U)
        return U * mp.besselj(1, U) / mp.besselj(0, U) - W * mp.besselk(1, W) / mp.besselk(0, W)

    # dense scan for a sign change, then refine
    grid = [mp.mpf(i) / 2000 * min(V, mp.mpf("2.404825557695773")) for i in range(1, 2000)]
    prev = grid[0]
    for g in grid[1:]:
        if mp.sign(f(prev)) != mp.sign(f(g)):
            return mp.findroot(f, (prev, g), solver="anderson", tol=mp.mpf(10) ** -35)
        prev = g
    raise RuntimeError("no root")


def overlap_ratio(V, a):
    U = lp01_U(V)
    W = mp.sqrt(V * V - U * U)
    p, q = U / a, W / a

    def F(r):
        if r <= a:
            return mp.besselj(0, p * r) / mp.besselj(0, U)
        return mp.besselk(0, q * r) / mp.besselk(0, W)

    num = mp.quad(lambda r: 2 * mp.pi * r * F(r) ** 4, [0, a]) + mp.quad(
        lambda r: 2 * mp.pi * r * F(r) ** 4, [a, mp.inf]
    )
    den = mp.quad(lambda r: 2 * mp.pi * r * F(r) ** 2, [0, a]) + mp.quad(
        lambda r: 2 * mp.pi * r * F(r) ** 2, [a, mp.inf]
    )
    return U, num / den


def main():
    print("K(0.5) =", mp.nstr(agm_K(mp.mpf("0.5")), 20))
    sn, cn, dn = sncndn_ode(mp.mpf("0.3"), mp.mpf("0.5"))
    print("sncndn(0.3, 0.5) =", mp.nstr(sn, 20), mp.nstr(cn, 20), mp.nstr(dn, 20))
    sn, cn, dn = sncndn_ode(mp.mpf("0.7"), mp.mpf("0.8"))
    print("aux(0.7, 0.8) cd nd sd =", mp.nstr(cn / dn, 20), mp.nstr(1 / dn, 20), mp.nstr(sn / dn, 20))
    th = theta_series(0, 0, mp.mpf("0.2"), mp.mpc(0, 1))
    print("theta00(0.2, i) =", mp.nstr(th.real, 20), mp.nstr(th.imag, 20))

    # LP01 at V = 2.0: a = 4 um, n1 = 1.45, nc = 1.445
    a = mp.mpf("4e-6")
    n1, nc = mp.mpf("1.45"), mp.mpf("1.445")
    na = mp.sqrt(n1**2 - nc**2)
    for V in (mp.mpf(2), mp.mpf("2.2")):
        k0 = V / (a * na)
        U, ratio = overlap_ratio(V, a)
        beta = mp.sqrt(n1**2 * k0**2 - (U / a) ** 2)
        print(f"V={V}: lambda={mp.nstr(2 * mp.pi / k0, 20)} U={mp.nstr(U, 20)} n_e={mp.nstr(beta / k0, 20)} ratio={mp.nstr(ratio, 20)}")


if __name__ == "__main__":
    main()
