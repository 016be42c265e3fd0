import math

import numpy as np
import pytest

from fig8rt.arith import CFExpansion, SurgerySlope, evaluate_cf
from fig8rt.rt_exact import (BudgetExceeded, build_root_data, factorial_log_defect, g_r_factorial,
                             g_r_sample, lattice_sum, rt_direct, rt_symmetrized, tail_log_max,
                             tv_proxy)
from fig8rt.asymptotics.regions import DEFAULT_DELTA
from fig8rt.specfun import PI, VOL_41


@pytest.mark.parametrize("pq", [(5, 1), (5, 2), (7, 2), (7, 3)])
def test_two_formulas_agree(pq):
    for r in range(5, 32, 2):
        rd = build_root_data(r)
        a = rt_symmetrized(pq, rd).value
        b = rt_direct(pq, rd).value
        assert abs(a - b) <= 1e-9 * abs(b)


@pytest.mark.parametrize("a", [(-2, 2), (3, -1, 2), (-3, 3), (2, 1, 2)])
def test_kirby_invariance(a):
    # a different expansion of the same slope is a different surgery diagram of the same manifold
    cf = CFExpansion.from_coefficients(a)
    v = evaluate_cf(cf)
    s = SurgerySlope(v.numerator, v.denominator)
    for r in (7, 11, 13):
        rd = build_root_data(r)
        ref = rt_direct(s, rd).value
        assert abs(rt_direct(s, rd, cf=cf).value - ref) < 1e-9 * max(1.0, abs(ref))
        assert abs(rt_symmetrized(s, rd, cf=cf).value - ref) < 1e-9 * max(1.0, abs(ref))


def test_orientation_reversal_conjugates():
    for r in (7, 11, 21):
        rd = build_root_data(r)
        a = rt_symmetrized((5, 2), rd).value
        b = rt_symmetrized((-5, 2), rd).value
        assert abs(a - np.conj(b)) < 1e-10 * abs(a)


def test_tv_proxy_is_modulus_squared():
    rd = build_root_data(31)
    v = rt_symmetrized((5, 2), rd).value
    assert tv_proxy((5, 2), rd) == pytest.approx(abs(v) ** 2, rel=1e-14)


def test_nonhyperbolic_still_computes():
    rd = build_root_data(11)
    assert np.isfinite(rt_symmetrized((1, 1), rd).value)


def test_budget():
    with pytest.raises(BudgetExceeded):
        rt_symmetrized((5, 2), build_root_data(101), budget=1000)


def test_root_data_validation():
    with pytest.raises(ValueError):
        build_root_data(10)


def test_dilogarithm_form_matches_factorial_form():
    r = 11
    rd = build_root_data(r)
    for point in [(1.5, 0.5, 1.5), (-2.5, -0.5, 3.5), (0.5, -1.5, 2.5), (2.5, 2.5, 3.5), (1.5, -2.5, 3.5)]:
        *ms, mp = point
        M = [np.array(int(2 * v)) for v in ms]
        ref = complex(g_r_factorial_eps(rd, M, int(2 * mp)))
        assert abs(g_r_sample((5, 2), rd, point) - ref) < 1e-8 * abs(ref)


def g_r_factorial_eps(rd, M, Mp):
    from fig8rt.arith import expand_negative_cf
    return g_r_factorial(expand_negative_cf(5, 2), rd, M, np.array(Mp))


def test_lattice_sum_is_invariant():
    rd = build_root_data(13)
    assert abs(lattice_sum((5, 2), rd) - rt_symmetrized((5, 2), rd).value) < 1e-9


def test_factorial_magnitude_law():
    ratios = [factorial_log_defect(r) / math.log(r) for r in (51, 101, 201)]
    assert max(ratios) < 1.0
    assert max(ratios) - min(ratios) < 0.1


def test_off_window_tail():
    # the exponential rate holds up to the O(log r) factorial error
    for r in (51, 101):
        top = tail_log_max((5, 2), build_root_data(r), DEFAULT_DELTA)
        expo = r / (4 * PI) * (VOL_41 / 2 + 0.05)
        assert top - expo <= 2 * factorial_log_defect(r)
