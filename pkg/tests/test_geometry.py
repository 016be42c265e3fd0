import math

import mpmath as mp
import numpy as np
import pytest

from fig8rt.geometry import (DomainError, SMALL_PAIRS, fkp_half_volume_threshold, fkp_lower_bound,
                             gluing_residual, hessian_v, holonomies, holonomies_from_shapes,
                             hyperbolic_slopes, potential_v, potential_v_closed, reduce_cs,
                             shape_logs, solve_critical, yoshida_check)
from fig8rt.specfun import PI, VOL_41


def bloch_wigner(z):
    return float(mp.im(mp.polylog(2, z)) + mp.arg(1 - z) * mp.log(abs(z)))


def test_known_solution():
    c = solve_critical((5, 2))
    assert c.volume == pytest.approx(1.5294773294, abs=1e-9)
    assert c.cs == pytest.approx(4.63126, abs=1e-5)
    assert abs(c.x0 - (0.16545 - 0.33598j)) < 1e-4
    assert abs(c.y0 - (0.43925 - 0.15043j)) < 1e-4


@pytest.mark.parametrize("pq,vol", [((5, 1), 0.9813688289), ((6, 1), 1.2844853005),
                                    ((7, 3), 1.8058272136), ((5, 2), 1.5294773294)])
def test_volume_equals_bloch_wigner_sum(pq, vol):
    c = solve_critical(pq)
    assert c.volume == pytest.approx(bloch_wigner(c.A) + bloch_wigner(c.B), abs=1e-12)
    assert c.volume == pytest.approx(vol, abs=1e-9)


def test_all_small_slopes():
    for s in hyperbolic_slopes(12, 3):
        c = solve_critical(s)
        assert c.residual_c < 1e-12
        assert c.residual_hg < 1e-10
        assert c.A.imag > 0 and c.B.imag > 0
        assert abs(c.hess_det) > 1e-6
        assert c.x0.imag != 0
        assert yoshida_check(s, c) < 1e-9
        assert c.volume >= fkp_lower_bound(s)[0]


def test_small_pairs_exceed_half_volume():
    for pq in SMALL_PAIRS:
        assert solve_critical(pq).volume > VOL_41 / 2


def test_fkp():
    assert fkp_lower_bound((1, 1)) == (0.0, True)
    bound, vac = fkp_lower_bound((6, 1))
    assert not vac
    assert bound == pytest.approx((1 - 4 * PI**2 / 48) ** 1.5 * VOL_41)
    assert fkp_half_volume_threshold() == pytest.approx(106.687, abs=1e-3)


def test_exceptional_rejected():
    with pytest.raises(DomainError):
        solve_critical((0, 1))


def test_potential_forms_agree():
    for x, y in [(0.1, 0.7), (-0.2, 0.5 + 0.1j)]:
        for sign in "+-":
            a = potential_v(sign, (5, 2), x, y)
            b = potential_v_closed(sign, (5, 2), x, y)
            assert abs(a - b) < 1e-10


def test_hessian_matches_finite_differences():
    c = solve_critical((7, 3))
    H, det = hessian_v("+", (7, 3), c.x0, c.y0)
    h = 1e-4
    f = lambda x, y: potential_v("+", (7, 3), x, y)
    fxx = (f(c.x0 + h, c.y0) - 2 * f(c.x0, c.y0) + f(c.x0 - h, c.y0)) / h**2
    fyy = (f(c.x0, c.y0 + h) - 2 * f(c.x0, c.y0) + f(c.x0, c.y0 - h)) / h**2
    assert abs(H[0, 0] - fxx) < 1e-5 * abs(fxx)
    assert abs(H[1, 1] - fyy) < 1e-5 * abs(fyy)
    assert abs(det - (H[0, 0] * H[1, 1] - H[0, 1] ** 2)) < 1e-10


def test_holonomies_agree():
    c = solve_critical((5, 2))
    hm, hl, _ = holonomies((5, 2), c)
    hm2, hl2 = holonomies_from_shapes((5, 2), c)
    assert abs(hm - hm2) < 1e-10
    assert abs(hl - hl2) < 1e-10
    assert abs(5 * hm + 2 * hl - 2j * PI) < 1e-10


def test_reduce_cs():
    assert reduce_cs(PI**2 + 0.3) == pytest.approx(0.3)
    assert -PI**2 / 2 < reduce_cs(7.0) <= PI**2 / 2
