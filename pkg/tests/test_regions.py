import numpy as np
import pytest

from fig8rt.arith import expand_negative_cf
from fig8rt.asymptotics.regions import (DEFAULT_DELTA, MARGIN_TOL, FourierIndex, Region,
                                        chain_quadratic, completion, compute_k0, escapes, interior_lemma_scan,
                                        reduced_quadratic, solve_delta, v_r_potential, x1_closed)
from fig8rt.geometry import DomainError, potential_v
from fig8rt.specfun import PI, lobachevsky


def test_delta_solves_lobachevsky_equation():
    assert lobachevsky(DEFAULT_DELTA) == pytest.approx(0.05 / 4, abs=1e-14)
    assert 0 < DEFAULT_DELTA < 0.01
    assert solve_delta(0.1) > DEFAULT_DELTA


def test_regions():
    assert Region("D").contains(0.1, 0.7)
    assert Region("D'").contains(-1.6, 1.9)
    assert Region("D''").contains(1.6, 1.9)
    assert not Region("D").contains(1.2, 0.3)
    with pytest.raises(ValueError):
        Region("E")
    z1, z2 = Region("D'").phi_arguments(51, -1.6, 1.9)
    assert z2 == pytest.approx(1.9 + 1.6 - PI + PI / 51)


def test_finite_r_potential_converges_like_one_over_r():
    err = [abs(v_r_potential("+", (5, 2), r, Region("D"), 0.1, 0.7)
               - potential_v("+", (5, 2), 0.1, 0.7)) for r in (51, 101, 201)]
    assert err[1] / err[0] == pytest.approx(0.5, abs=0.05)
    assert err[2] / err[1] == pytest.approx(0.5, abs=0.05)


def test_sign_variants_differ_by_linear_term():
    for x, y in [(0.1, 0.7), (-0.3, 0.6)]:
        d = (v_r_potential("+", (5, 2), 51, Region("D"), x, y)
             - v_r_potential("-", (5, 2), 51, Region("D"), x, y))
        assert d == pytest.approx(4 * PI * x / 2)


def test_region_violation():
    with pytest.raises(DomainError):
        v_r_potential("+", (5, 2), 51, Region("D"), 1.5, 0.1)


@pytest.mark.parametrize("pq", [(5, 2), (7, 3), (13, 5), (-7, 3)])
@pytest.mark.parametrize("variant", [0, 1])
def test_completion_is_critical_and_closed_form(pq, variant):
    cf = expand_negative_cf(pq)
    x = np.linspace(-2.5, 2.5, 7)
    xs = completion(cf, x, None, variant)
    assert np.allclose(xs[0], x1_closed(pq, x, variant))
    h = 1e-5
    for i in range(cf.k - 1):
        up = [v.copy() for v in xs]
        dn = [v.copy() for v in xs]
        up[i] = up[i] + h
        dn[i] = dn[i] - h
        grad = (chain_quadratic(cf, up, 0.3, None, variant) - chain_quadratic(cf, dn, 0.3, None, variant)) / (2 * h)
        assert np.max(np.abs(grad)) < 1e-6


@pytest.mark.parametrize("n", [(1,), (-1,), (2,)])
def test_reduction_leaves_a_constant(n):
    cf = expand_negative_cf(5, 2)
    idx = FourierIndex.build(cf, n, 1, -1)
    assert idx.k0 == compute_k0(cf, n)
    diffs = []
    for x, y in [(0.1, 0.5), (-0.4, 0.9), (0.7, 0.2)]:
        xs = [float(v) for v in completion(cf, x, idx.n, 0)]
        diffs.append(chain_quadratic(cf, xs, y, idx, 0) - reduced_quadratic((5, 2), x, y, idx, 0))
    assert np.ptp(diffs) < 1e-10


def test_interior_lemma():
    # the window pi - c_{i-1} pi / r always holds
    for pq in [(5, 2), (7, 3), (13, 5), (7, 2)]:
        for r in (21, 51, 101):
            assert interior_lemma_scan(pq, r) >= -MARGIN_TOL
    # the uniform window pi - 2 pi / r fails at the endpoints when q = 2
    assert interior_lemma_scan((5, 2), 51, bound="stated") == pytest.approx(-PI / 51, abs=1e-9)
    assert interior_lemma_scan((13, 5), 51, bound="stated") > 0


def test_escape_for_large_k0():
    cf = expand_negative_cf(7, 3)
    for n in [(0, 1), (1, -1), (2, 0)]:
        k0 = compute_k0(cf, n)
        if k0 == 0 or abs(k0) >= 3:
            assert escapes((7, 3), n)
    assert not escapes((7, 3), (0, 0))
