"""Integration regions, Gaussian completions and the reduced potentials.

After the Gaussian integrals over x_1..x_{k-1} are done, each Fourier
coefficient becomes a two-dimensional integral in (x, y) = (x_k, y) whose
phase is one of the reduced potentials

    V_r^{s}(x, y) = (-p x^2 + s 2 pi x)/q - 2 pi x + 4 x y
                    - phi_r(z1) + phi_r(z2) - p' pi^2 / q,

with (z1, z2) depending on the region (D, D' or D'').
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from ..arith import CFExpansion, SurgerySlope, dual_pair, expand_negative_cf
from ..geometry import DomainError
from ..specfun import PI, lobachevsky, phi_r

KINDS = ("D", "D'", "D''")


@dataclass(frozen=True)
class Region:
    """One of D_eps, D'_eps, D''_eps in the (x, y) plane.

    With u = y + x and v = y - x each region is a square in (u, v).
    """

    kind: str = "D"
    margin: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"region kind must be one of {KINDS}, got {self.kind!r}")
        if not 0 <= self.margin < PI / 4:
            raise ValueError("region margin must lie in [0, pi/4)")

    @property
    def u_range(self) -> tuple[float, float]:
        lo = PI if self.kind == "D''" else 0.0
        return lo + self.margin, lo + PI / 2 - self.margin

    @property
    def v_range(self) -> tuple[float, float]:
        lo = PI if self.kind == "D'" else 0.0
        return lo + self.margin, lo + PI / 2 - self.margin

    @property
    def epsilon(self) -> int:
        """The epsilon weight of the lattice form on this region."""
        return 2 if self.kind == "D" else 1

    def contains(self, x, y) -> np.ndarray:
        """Membership test on real parts (so it also serves the complexified region)."""
        u = np.real(np.asarray(y) + np.asarray(x))
        v = np.real(np.asarray(y) - np.asarray(x))
        (u0, u1), (v0, v1) = self.u_range, self.v_range
        return (u0 < u) & (u < u1) & (v0 < v) & (v < v1)

    def phi_arguments(self, r, x, y):
        """Arguments (z1, z2) of the two quantum dilogarithms."""
        z1 = PI - y - x - PI / r
        z2 = y - x + PI / r
        if self.kind == "D'":
            z2 = z2 - PI
        elif self.kind == "D''":
            z1 = z1 + PI
        return z1, z2


def all_regions(margin: float = 0.0) -> tuple[Region, ...]:
    return tuple(Region(kind, margin) for kind in KINDS)


def solve_delta(eps: float = 0.05) -> float:
    """The delta with Lambda(delta) = eps/4 (on the increasing branch near 0)."""
    target = eps / 4
    if not 0 < target < lobachevsky(PI / 6):
        raise ValueError("eps/4 must lie in (0, Lambda(pi/6))")
    return brentq(lambda d: lobachevsky(d) - target, 1e-15, PI / 6, xtol=1e-15)


DEFAULT_DELTA = solve_delta(0.05)


def _slope(slope) -> SurgerySlope:
    return slope if isinstance(slope, SurgerySlope) else SurgerySlope(*slope)


def v_r_potential(sign, slope, r, region: Region, x, y, check=True):
    """V_r^{+-}(x, y) on the given region (vectorized over x, y)."""
    s = _slope(slope)
    sg = {"+": 1, "-": -1, 1: 1, -1: -1}.get(sign)
    if sg is None:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if check and not np.all(region.contains(x, y)):
        raise DomainError(f"v_r_potential: point outside region {region.kind}")
    pp = dual_pair(s).p_prime
    z1, z2 = region.phi_arguments(r, x, y)
    val = ((-s.p * x * x + sg * 2 * PI * x) / s.q - 2 * PI * x + 4 * x * y
           - phi_r(r, z1) + phi_r(r, z2) - pp * PI**2 / s.q)
    return complex(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Fourier indices and Gaussian completions


@dataclass(frozen=True)
class FourierIndex:
    """Index (n_1..n_{k-1}, k1, k2) of a Fourier coefficient.

    n are the indices of the chain variables x_1..x_{k-1}, k1 that of
    x = x_k and k2 that of y.  k0 is derived from n and the c_i.
    """

    n: tuple[int, ...]
    k1: int
    k2: int
    k0: int

    @classmethod
    def build(cls, cf: CFExpansion, n, k1=0, k2=0) -> "FourierIndex":
        n = tuple(int(v) for v in n)
        if len(n) != cf.k - 1:
            raise ValueError(f"need {cf.k - 1} chain indices, got {len(n)}")
        return cls(n, int(k1), int(k2), compute_k0(cf, n))

    def check(self, cf: CFExpansion) -> bool:
        return compute_k0(cf, self.n) == self.k0

    @property
    def full(self) -> tuple[int, ...]:
        return (*self.n, self.k1, self.k2)


def compute_k0(cf: CFExpansion, n) -> int:
    """k0 = sum_{j=1}^{k-1} (-1)^{k-j} n_j c_{j-1}."""
    k = cf.k
    tot = sum((-1) ** (k - j) * n[j - 1] * cf.c[j - 1] for j in range(1, k))
    return int(Fraction(tot))


def completion(cf: CFExpansion, x, n=None, variant: int = 0):
    """Critical x_1(x)..x_k(x) of the chain quadratic for fixed x_k = x.

    variant 0 completes V_r - 4 pi sum n_i x_i, variant 1 completes
    V_r + 4 pi x_1 - 4 pi sum n_i x_i.  Returns a list indexed 0..k-1.
    """
    k = cf.k
    n = (0,) * (k - 1) if n is None else tuple(n)
    sgn = 1 if variant == 0 else -1
    xs = [None] * k
    xs[k - 1] = np.asarray(x)
    for i in range(k - 1, 0, -1):  # i is the 1-based index
        bi, ci = float(cf.b[i - 1]), float(cf.c[i])
        shift = sum((-1) ** (i - j) * 2 * n[j - 1] * float(cf.c[j - 1]) * PI / ci
                    for j in range(1, i + 1))
        xs[i - 1] = -xs[i] / bi - shift + sgn * (-1) ** i * PI / ci
    return xs


def x1_closed(slope, x, variant: int = 0):
    """x_1(x) = ((-1)^{k-1} x + p' pi)/q; variant 1 has -p' pi."""
    s = _slope(slope)
    cf = expand_negative_cf(s)
    pp = dual_pair(s).p_prime
    sg = 1 if variant == 0 else -1
    return ((-1) ** (cf.k - 1) * np.asarray(x) + sg * pp * PI) / s.q


def reduced_sign(cf: CFExpansion, variant: int) -> int:
    """Sign s of V^s carried by the variant-0 or variant-1 reduction."""
    s = (-1) ** cf.k
    return s if variant == 0 else -s


def chain_quadratic(cf: CFExpansion, xs, y, index: FourierIndex | None = None,
                    variant: int = 0):
    """Quadratic part of the (k+1)-variable phase including Fourier terms."""
    a = cf.a
    k = cf.k
    val = -sum(ai * xi * xi for ai, xi in zip(a, xs))
    val = val - 2 * sum(xs[i] * xs[i + 1] for i in range(k - 1))
    val = val - 2 * PI * xs[0] - 2 * PI * xs[-1] + 4 * xs[-1] * y
    if variant == 1:
        val = val + 4 * PI * xs[0]
    if index is not None:
        val = val - 4 * PI * sum(ni * xi for ni, xi in zip(index.n, xs[:-1]))
        val = val - 4 * PI * index.k1 * xs[-1] - 4 * PI * index.k2 * y
    return val


def reduced_quadratic(slope, x, y, index: FourierIndex | None = None, variant: int = 0):
    """Quadratic part of V^{(k0,k1,k2)} without the constant C."""
    s = _slope(slope)
    cf = expand_negative_cf(s)
    pp = dual_pair(s).p_prime
    sg = reduced_sign(cf, variant)
    val = (-s.p * x * x + sg * 2 * PI * x) / s.q - 2 * PI * x + 4 * x * y - pp * PI**2 / s.q
    if index is not None:
        val = val - 4 * index.k0 * PI * x / s.q - 4 * PI * index.k1 * x - 4 * PI * index.k2 * y
    return val


def completion_constant(slope, index: FourierIndex | None = None, variant: int = 0) -> float:
    """The real constant C of the reduction (zero for the leading indices)."""
    s = _slope(slope)
    cf = expand_negative_cf(s)
    n = None if index is None else index.n
    xs = completion(cf, 0.0, n, variant)
    xs = [float(v) for v in xs]
    full = chain_quadratic(cf, xs, 0.0, index, variant)
    return float(full - reduced_quadratic(s, 0.0, 0.0, index, variant))


# ---------------------------------------------------------------------------
# range lemmas for the completions


MARGIN_TOL = 1e-12


def interior_lemma_scan(slope, r, npts: int = 2001, variant: int = 0,
                        bound: str = "proof") -> float:
    """Smallest margin of the completions x_i(x), i < k, inside their window.

    x runs over the closed interval [-pi + q pi/r, pi - q pi/r] (endpoints
    included, where equality is allowed).  bound="proof" uses the window
    |x_i| < pi - c_{i-1} pi/r; bound="stated" uses |x_i| < pi - 2 pi/r.
    The margin is 0 where equality is attained at an endpoint, so callers
    compare against -MARGIN_TOL to absorb rounding.
    """
    s = _slope(slope)
    cf = expand_negative_cf(s)
    lo, hi = -PI + s.q * PI / r, PI - s.q * PI / r
    x = lo + (hi - lo) * np.linspace(0.0, 1.0, npts)
    xs = completion(cf, x, None, variant)
    worst = np.inf
    for i, xi in enumerate(xs[:-1], start=1):
        c = float(cf.c[i - 1]) if bound == "proof" else 2.0
        worst = min(worst, float(np.min(PI - c * PI / r - np.abs(xi))))
    return worst


def escapes(slope, n, npts: int = 2001, variant: int = 0, which=None) -> bool:
    """True if for every x in (-pi, pi) some x_i(x) (i < k) leaves (-pi, pi).

    ``which`` restricts the test to one 1-based index i.
    """
    s = _slope(slope)
    cf = expand_negative_cf(s)
    x = np.linspace(-PI, PI, npts)[1:-1]
    xs = completion(cf, x, n, variant)[:-1]
    if which is not None:
        xs = [xs[which - 1]]
    out = np.zeros(x.shape, dtype=bool)
    for xi in xs:
        out |= np.abs(xi) >= PI - 1e-12
    return bool(out.all())
