import math

import mpmath as mp
import numpy as np
import pytest

from fig8rt.specfun import (PI, VOL_41, clausen2, li2, lobachevsky, phi_r, phi_r_asymptotic,
                            phi_r_prime, qpochhammer)


@pytest.mark.parametrize("z", [0.3, -0.7, 0.9 + 0.4j, -2.5 + 1j, 3.0 + 0.2j, 0.5j, np.exp(2.1j)])
def test_li2_matches_mpmath(z):
    assert abs(li2(z) - complex(mp.polylog(2, z))) < 1e-12


def test_li2_rejects_branch_cut():
    with pytest.raises(ValueError):
        li2(3.0)


def test_li2_reflection():
    # Li2(-1/2) + Li2(-2) = -pi^2/6 - (log 2)^2 / 2
    assert abs(li2(-0.5) + li2(-2.0) + PI**2 / 6 + 0.5 * math.log(2) ** 2) < 1e-12


def test_lobachevsky_matches_clausen():
    for th in np.linspace(-3, 3, 13):
        assert abs(lobachevsky(th) - 0.5 * float(mp.clsin(2, 2 * th))) < 1e-12
        assert abs(clausen2(2 * th) - float(mp.clsin(2, 2 * th))) < 1e-12


def test_lobachevsky_identities():
    th = np.linspace(-4, 4, 1000)
    assert np.max(np.abs(lobachevsky(th) + lobachevsky(-th))) < 1e-12
    assert np.max(np.abs(lobachevsky(th + PI) - lobachevsky(th))) < 1e-12
    assert np.max(np.abs(0.5 * lobachevsky(2 * th) - lobachevsky(th) - lobachevsky(th + PI / 2))) < 1e-12
    assert abs(lobachevsky(PI / 6) - 1.5 * lobachevsky(PI / 3)) < 1e-12
    assert abs(VOL_41 - 2.029883212819307) < 1e-12


def test_lobachevsky_extrema():
    th = np.linspace(0, PI, 2001)
    vals = lobachevsky(th)
    assert abs(th[np.argmax(vals)] - PI / 6) < 2e-3
    assert abs(th[np.argmin(vals)] - 5 * PI / 6) < 2e-3


def test_li2_on_unit_circle():
    for th in np.linspace(0.1, 3.0, 9):
        lhs = li2(np.exp(2j * th))
        assert abs(lhs - (PI**2 / 6 + th * (th - PI) + 2j * lobachevsky(th))) < 1e-10


def mp_phi(r, z):
    # the defining contour integral by mpmath: rays plus an upper semicircle
    mp.mp.dps = 20
    z = mp.mpc(z)

    def f(x):
        return mp.exp((2 * z - mp.pi) * x) / (4 * x * mp.sinh(mp.pi * x) * mp.sinh(2 * mp.pi * x / r))

    eps = mp.mpf("0.5")
    rays = mp.quad(f, [-mp.inf, -eps]) + mp.quad(f, [eps, mp.inf])
    semi = mp.quad(lambda t: f(eps * mp.expj(t)) * 1j * eps * mp.expj(t), [mp.pi, 0])
    return complex(4j * mp.pi / r * (rays + semi))


@pytest.mark.parametrize("r,z", [(7, 1.0), (11, 0.6 + 0.2j), (21, 2.2 - 0.1j)])
def test_phi_r_matches_mpmath_contour(r, z):
    assert abs(phi_r(r, z) - mp_phi(r, z)) < 1e-10


def test_shift_equations():
    r = 7
    lam = r / (4j * PI)
    z = PI / 3
    lhs = np.exp(lam * (phi_r(r, z - PI / r) - phi_r(r, z + PI / r)))
    assert abs(lhs - (1 - np.exp(2j * z))) < 1e-9
    z = PI / (2 * r)
    lhs = np.exp(lam * (phi_r(r, z) - phi_r(r, z + PI)))
    assert abs(lhs - (1 + np.exp(1j * r * z))) < 1e-9


@pytest.mark.parametrize("r", [5, 7, 11, 21])
def test_factorial_identities(r):
    lam = r / (4j * PI)
    p0 = phi_r(r, PI / r)
    for n in range(r - 1):
        exact = qpochhammer(r, n)
        one = np.exp(lam * (p0 - phi_r(r, 2 * PI * n / r + PI / r)))
        assert abs(one / exact - 1) < 1e-8
        if n >= (r - 1) // 2 + 1:
            two = 2 * np.exp(lam * (p0 - phi_r(r, 2 * PI * n / r + PI / r - PI)))
            assert abs(two / exact - 1) < 1e-8


def test_asymptotic_expansion_order():
    rs = np.array([11, 21, 41, 81])
    z = PI / 3 + 0.1j
    err = [abs(phi_r(r, z) - phi_r_asymptotic(r, z)) for r in rs]
    slope = np.polyfit(np.log(1.0 / rs), np.log(err), 1)[0]
    assert slope > 3.8  # O(1/r^4)
    # at z = pi/2 the two-term expansion is already exact to rounding
    assert max(abs(phi_r(r, PI / 2) - phi_r_asymptotic(r, PI / 2)) for r in rs) < 1e-13


def test_derivative():
    r, z = 21, PI / 4 + 0.1j
    h = 1e-5
    fd = (phi_r(r, z + h) - phi_r(r, z - h)) / (2 * h)
    assert abs(fd - phi_r_prime(r, z)) < 1e-7
    err = [abs(phi_r_prime(r, PI / 2) + 2j * math.log(2)) for r in (21, 41, 81)]
    assert err[2] < err[1] < err[0]
    assert err[1] / err[2] > 3.5


def test_pole_and_r_validation():
    with pytest.raises(ValueError):
        phi_r(8, 1.0)
    with pytest.raises(ValueError):
        phi_r(7, PI + PI / 7)
