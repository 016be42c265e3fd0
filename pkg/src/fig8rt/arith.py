"""Surgery arithmetic for p/q fillings: negative continued fractions,
partial products c_i, the dual pair (p', q') and the linking signature.

Everything here is exact (integers and Fractions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

# Exceptional slopes of the figure-8 knot (the filled manifold is not hyperbolic).
EXCEPTIONAL = frozenset({(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1),
                         (3, 1), (-3, 1), (4, 1), (-4, 1)})


@dataclass(frozen=True)
class SurgerySlope:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if q == 0:
            raise ValueError(f"slope {p}/{q}: q must be nonzero")
        if q < 0:
            # slopes are projective
            object.__setattr__(self, "p", -p)
            object.__setattr__(self, "q", -q)
        if gcd(abs(self.p), self.q) != 1:
            raise ValueError(f"slope {self.p}/{self.q}: p and q must be coprime")

    @property
    def hyperbolic(self) -> bool:
        return (self.p, self.q) not in EXCEPTIONAL

    def __str__(self):
        return f"{self.p}/{self.q}"


@dataclass(frozen=True)
class CFExpansion:
    a: tuple[int, ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]  # c_0 .. c_{k-1}; integers for admissible expansions

    @property
    def k(self) -> int:
        return len(self.a)

    @classmethod
    def from_coefficients(cls, a) -> "CFExpansion":
        """Build b_i, c_i from arbitrary framings a_1..a_k (any integers)."""
        a = tuple(int(v) for v in a)
        if not a:
            raise ValueError("empty expansion")
        b = []
        for i, ai in enumerate(a):
            if i == 0:
                b.append(Fraction(ai))
            else:
                if b[-1] == 0:
                    raise ZeroDivisionError(f"degenerate expansion {a}: b_{i} = 0")
                b.append(ai - 1 / b[-1])
        c = [Fraction(1)]
        for bi in b[:-1]:
            c.append(c[-1] * bi)
        return cls(a, tuple(b), tuple(c))


@dataclass(frozen=True)
class DualPair:
    p_prime: int
    q_prime: int


def _slope(p, q) -> SurgerySlope:
    if isinstance(p, SurgerySlope):
        return p
    if q is None and isinstance(p, tuple):
        return SurgerySlope(*p)
    return SurgerySlope(p, q)


def expand_negative_cf(p, q=None) -> CFExpansion:
    """p/q = a_k - 1/(a_{k-1} - ... - 1/a_1) with a_i >= 2 for i < k."""
    s = _slope(p, q)
    if s.q < 1:
        raise ValueError("q must be positive")
    x = Fraction(s.p, s.q)
    rev = []
    while True:
        if x.denominator == 1:
            rev.append(x.numerator)
            break
        ai = x.numerator // x.denominator + 1
        rev.append(ai)
        x = 1 / (ai - x)  # > 1, so the next coefficient is >= 2
    return CFExpansion.from_coefficients(reversed(rev))


def evaluate_cf(cf) -> Fraction:
    """Exact value of the expansion; accepts a CFExpansion or a coefficient list."""
    a = cf.a if isinstance(cf, CFExpansion) else tuple(cf)
    if not a:
        raise ValueError("empty expansion")
    val = Fraction(a[0])
    for ai in a[1:]:
        if val == 0:
            raise ZeroDivisionError(f"degenerate expansion {a}")
        val = ai - 1 / val
    return val


def dual_pair(p, q=None) -> DualPair:
    """(p', q') with p p' + q q' = 1 and -q < p' <= 0."""
    s = _slope(p, q)
    if s.q == 1:
        return DualPair(0, 1)
    pp = pow(s.p, -1, s.q)  # p * pp = 1 mod q, 0 < pp < q
    pp -= s.q
    qq = (1 - s.p * pp) // s.q
    assert s.p * pp + s.q * qq == 1
    return DualPair(pp, qq)


def cf_sum_identity(cf: CFExpansion) -> Fraction:
    """sum_{j=1}^{k-1} 1/(c_{j-1} c_j); equals -p'/q."""
    c = cf.c
    return sum((1 / (c[j - 1] * c[j]) for j in range(1, cf.k)), Fraction(0))


def linking_matrix(cf) -> np.ndarray:
    a = cf.a if isinstance(cf, CFExpansion) else tuple(cf)
    k = len(a)
    m = np.diag(np.array(a, dtype=float))
    for i in range(k - 1):
        m[i, i + 1] = m[i + 1, i] = 1.0
    return m


def linking_signature(cf) -> int:
    """Signature of the tridiagonal linking matrix of the chain link.

    Uses the sign sequence of leading principal minors (Sylvester/Jacobi);
    if a minor vanishes we fall back to eigenvalue signs.
    """
    a = cf.a if isinstance(cf, CFExpansion) else tuple(cf)
    # minors of a tridiagonal matrix: D_i = a_i D_{i-1} - D_{i-2}
    minors = [1, a[0]]
    for ai in a[1:]:
        minors.append(ai * minors[-1] - minors[-2])
    if any(d == 0 for d in minors[1:]):
        ev = np.linalg.eigvalsh(linking_matrix(a))
        return int(np.sum(ev > 1e-12) - np.sum(ev < -1e-12))
    sig = 0
    for prev, cur in zip(minors, minors[1:]):
        sig += 1 if (prev > 0) == (cur > 0) else -1
    return sig
