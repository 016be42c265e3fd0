import math

import numpy as np
import pytest

from fig8rt.arith import expand_negative_cf
from fig8rt.asymptotics.saddle import (align_pi2, continued_sqrt_det, convergence_table,
                                       fit_residuals, kappa_log, saddle_prediction,
                                       smoothed_decreasing)
from fig8rt.geometry import solve_critical
from fig8rt.rt_exact import build_root_data, kappa_r
from fig8rt.specfun import PI


@pytest.mark.parametrize("slope", [(5, 2), (7, 3), (13, 5), (6, 1), (-5, 2)])
def test_closed_form_kappa_matches_state_sum_normalization(slope):
    cf = expand_negative_cf(slope)
    for r in (5, 51, 101):
        assert abs(np.exp(kappa_log(cf, r)) / kappa_r(cf, build_root_data(r)) - 1) < 1e-12


def test_sqrt_det_branch():
    H = -1j * np.array([[2.0, 0.5], [0.5, 1.0]])  # i H real positive definite
    root, branch = continued_sqrt_det(H)
    assert branch == "continued"
    assert root == pytest.approx(math.sqrt(1.75))
    c = solve_critical((5, 2))
    from fig8rt.geometry import hessian_v
    H, det = hessian_v("+", (5, 2), c.x0, c.y0)
    root, branch = continued_sqrt_det(H)
    assert branch == "continued"
    assert abs(root**2 + det) < 1e-10 * abs(det)


def test_prediction_modulus_factorizes():
    r = 101
    c = solve_critical((5, 2))
    pred = saddle_prediction((5, 2), r, c)
    k = 2
    expected = abs(pred.kappa) * abs(pred.C) * r ** ((k + 1) / 2) * math.exp(r / (4 * PI) * c.volume)
    assert abs(pred.value) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("slope", [(5, 2), (7, 2), (6, 1), (-5, 2)])
def test_saddle_ratio_tends_to_one(slope):
    rows = convergence_table(slope, [51, 101, 151, 201])
    dev = [abs(row.saddle_ratio - 1) for row in rows]
    assert all(b < a for a, b in zip(dev, dev[1:]))
    assert dev[-1] < 0.25
    # O(1/r) in practice, faster than the O(1/sqrt r) bound
    assert dev[0] / dev[-1] > 3


def test_ratio_phase_settles():
    rows = convergence_table((5, 2), [53, 101, 149, 197])  # r = 1 mod 4 / 1 mod 4 ...
    phases = [abs(np.angle(row.saddle_ratio)) for row in rows]
    assert phases[-1] < phases[0] and phases[-1] < 0.02


def test_convergence_table():
    rs = list(range(51, 302, 50))
    rows = convergence_table((5, 2), rs)
    res = [row.residual for row in rows]
    assert res[-1] < res[0]
    assert smoothed_decreasing(res)
    assert fit_residuals(rs, res).relative_residual < 0.2
    assert len({row.pi2_shift for row in rows}) == 1
    for row in rows:
        assert row.tv_scaled == pytest.approx(row.rt_log_scaled.real, rel=1e-12)
    tv = [row.tv_residual for row in rows]
    assert tv[-1] < tv[0]


def test_alignment_minimizes():
    z = complex(1.4, 182.6)
    target, n = align_pi2(z, 1.5, 4.6)
    for m in (n - 1, n + 1):
        assert abs(z - target) <= abs(z - complex(1.5, 4.6 + m * PI**2))
