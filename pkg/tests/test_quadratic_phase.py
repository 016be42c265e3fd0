import math

import numpy as np
import pytest

from fig8rt.asymptotics.quadratic_phase import (LemmaHypothesisError, error_order,
                                                gaussian_phase_integral, pure_gaussian,
                                                verify_saddle_2d)
from fig8rt.specfun import PI


def test_interior_case_converges():
    rs = [64, 256, 1024]
    errs = []
    for r in rs:
        num, lead = gaussian_phase_integral(-1, 1, 0, PI / 2, 1, r)
        errs.append(abs(num / lead - 1))
    assert errs[-1] < errs[0]
    assert error_order(rs, errs) >= 0.45


def test_negative_gamma_and_complex_beta():
    errs = []
    for r in (256, 4096):
        num, lead = gaussian_phase_integral(-1, 1, 0.3, 0.2 + 0.1j, -2, r)
        errs.append(abs(num / lead - 1))
    assert errs[1] < errs[0] < 0.2


def test_exterior_case_is_order_one_over_r():
    vals = [abs(gaussian_phase_integral(-1, 1, 2, PI / 2, 1, r)[0]) * r for r in (64, 256, 1024, 4096)]
    assert max(vals) < 10
    assert gaussian_phase_integral(-1, 1, 2, PI / 2, 1, 64)[1] == 0


def test_fresnel_oracle():
    # int_{-inf}^{inf} exp(-i lam t^2) dt = sqrt(pi/lam) exp(-i pi/4); finite window differs by O(1/r)
    r = 4096
    num, _ = gaussian_phase_integral(-1, 1, 0, PI / 2, 1, r)  # sin(x + pi/2) = cos x ~ 1 near 0
    lam = r / (4 * PI)
    assert abs(num - math.sqrt(PI / lam) * np.exp(-1j * PI / 4)) < 0.05 * math.sqrt(PI / lam)


def test_hypothesis_violation():
    with pytest.raises(LemmaHypothesisError):
        gaussian_phase_integral(-1, 1, 0, 0, 1, 64)
    with pytest.raises(ValueError):
        gaussian_phase_integral(1, -1, 0, 0.5, 1, 64)


def test_pure_gaussian():
    for r in (50, 400):
        val, ref = pure_gaussian(0.5, r)
        assert abs(val - ref) < 1e-12 + math.exp(-0.25 * r)


def test_quadratic_models():
    assert verify_saddle_2d("quadratic", 101).relative_error < 1e-6
    for r in (101, 1001):
        assert verify_saddle_2d("quadratic2", r).relative_error * r == pytest.approx(0.5, abs=1e-3)


def test_vplus_case():
    rep = verify_saddle_2d("vplus", 101)
    assert rep.relative_error < 0.01
    # the finite-r integrand carries an extra O(1/r) correction
    assert rep.reference_error < 0.03
