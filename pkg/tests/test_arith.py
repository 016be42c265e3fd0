import math
from fractions import Fraction

import numpy as np
import pytest

from fig8rt.arith import (CFExpansion, SurgerySlope, cf_sum_identity, dual_pair, evaluate_cf,
                          expand_negative_cf, linking_matrix, linking_signature)


def brute_expansion(p, q):
    # continued fraction by the ceiling rule, written independently
    out = []
    x = Fraction(p, q)
    while x.denominator != 1:
        a = math.ceil(x) if x != math.ceil(x) else int(x)
        out.append(a)
        x = 1 / (a - x)
    out.append(int(x))
    return tuple(reversed(out))


def test_known_expansions():
    assert expand_negative_cf(5, 2).a == (2, 3)
    assert expand_negative_cf(7, 3).a == (2, 2, 3)
    assert expand_negative_cf(6, 1).a == (6,)
    assert expand_negative_cf((-5, 2)).a == (2, -2)


@pytest.mark.parametrize("p,q", [(5, 2), (7, 3), (13, 5), (-11, 4), (29, 12), (1, 7)])
def test_expansion_roundtrip(p, q):
    cf = expand_negative_cf(p, q)
    assert evaluate_cf(cf) == Fraction(p, q)
    assert all(a >= 2 for a in cf.a[:-1])
    assert cf.a == brute_expansion(p, q)


def test_c_are_integers_and_sum_identity():
    for q in range(1, 13):
        for p in range(-40, 41):
            if math.gcd(abs(p), q) != 1:
                continue
            cf = expand_negative_cf(p, q)
            assert all(c.denominator == 1 for c in cf.c)
            assert cf_sum_identity(cf) == Fraction(-dual_pair(p, q).p_prime, q)


def test_dual_pair():
    for p, q in [(5, 2), (7, 3), (-13, 5), (22, 7)]:
        d = dual_pair(p, q)
        assert p * d.p_prime + q * d.q_prime == 1
        assert -q < d.p_prime <= 0


def test_signature_matches_eigenvalues():
    for a in [(2, 3), (2, 2, 3), (3, -1, 2), (2, -2), (5,), (-4,)]:
        ev = np.linalg.eigvalsh(linking_matrix(a))
        assert linking_signature(CFExpansion.from_coefficients(a)) == int(np.sum(ev > 0) - np.sum(ev < 0))


def test_slope_validation():
    with pytest.raises(ValueError):
        SurgerySlope(1, 0)
    with pytest.raises(ValueError):
        SurgerySlope(4, 2)
    assert SurgerySlope(5, -2) == SurgerySlope(-5, 2)
    assert not SurgerySlope(4, 1).hyperbolic
    assert SurgerySlope(5, 1).hyperbolic
