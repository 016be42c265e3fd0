"""Dilogarithm, Lobachevsky function and the quantum dilogarithm phi_r.

phi_r(z) = (4 pi i / r) * int_Omega exp((2z - pi) x) / (4 x sinh(pi x) sinh(2 pi x / r)) dx

where Omega is the real line with the origin bypassed by a small upper
semicircle.  The integral converges for -pi/r < Re z < pi + pi/r; outside
that strip phi_r is continued with the shift relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli, factorial, zeta

PI = np.pi
PI2_6 = PI * PI / 6


# ---------------------------------------------------------------------------
# dilogarithm

_NB = 40
_BERN = bernoulli(_NB)
_BCOEF = np.array([_BERN[n] / factorial(n + 1, exact=False) for n in range(_NB + 1)])


def _li2_bernoulli(w):
    # sum_n B_n u^{n+1} / (n+1)!, u = -log(1-w); |u| < 2 pi on our domain
    u = -np.log1p(-w)
    u2 = u * u
    acc = np.zeros_like(u)
    for n in range(_NB, 1, -2):
        acc = acc * u2 + _BCOEF[n]
    return u + _BCOEF[1] * u2 + acc * u2 * u


def _li2_disk(w):
    # |w| <= 1
    out = np.empty_like(w)
    refl = w.real > 0.5
    one = refl & (w == 1)
    inner = ~refl
    out[inner] = _li2_bernoulli(w[inner])
    wr = w[refl & ~one]
    out[refl & ~one] = PI2_6 - np.log(wr) * np.log1p(-wr) - _li2_bernoulli(1 - wr)
    out[one] = PI2_6
    return out


def li2(z):
    """Principal branch of Li_2 (cut along (1, inf))."""
    scalar = np.isscalar(z)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any((z.imag == 0) & (z.real > 1)):
        raise ValueError("li2: argument on the branch cut (1, inf)")
    out = np.empty_like(z)
    big = np.abs(z) > 1
    out[~big] = _li2_disk(z[~big])
    zb = z[big]
    if zb.size:
        lg = np.log(-zb)
        out[big] = -_li2_disk(1 / zb) - PI2_6 - 0.5 * lg * lg
    return complex(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Lobachevsky function

_NC = 30
_CL_COEF = np.array([zeta(2 * k) / (k * (2 * k + 1) * (2 * PI) ** (2 * k))
                     for k in range(1, _NC + 1)])


def clausen2(phi):
    """Cl_2(phi) = sum sin(n phi)/n^2, via its power series on [-pi, pi]."""
    phi = np.asarray(phi, dtype=float)
    t = np.mod(phi + PI, 2 * PI) - PI
    t2 = t * t
    acc = np.zeros_like(t)
    for c in _CL_COEF[::-1]:
        acc = acc * t2 + c
    with np.errstate(divide="ignore", invalid="ignore"):
        lg = np.where(t == 0, 0.0, t * np.log(np.abs(np.where(t == 0, 1.0, t))))
    return t - lg + acc * t2 * t


def lobachevsky(theta):
    """Lambda(theta) = -int_0^theta log|2 sin t| dt = Cl_2(2 theta)/2."""
    out = 0.5 * clausen2(2 * np.asarray(theta, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


VOL_41 = 6 * lobachevsky(PI / 3)  # volume of the figure-8 knot complement


# ---------------------------------------------------------------------------
# quantum dilogarithm


@dataclass(frozen=True)
class ContourSpec:
    epsilon: float = 0.5
    cutoff: float | None = None  # None: derived from the decay rate
    panels: int = 16  # Gauss-Legendre points per ray panel


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _check_r(r):
    if int(r) != r or r < 3 or r % 2 == 0:
        raise ValueError(f"r must be an odd integer >= 3, got {r}")
    return int(r)


@lru_cache(maxsize=256)
def _semicircle(epsilon: float, n: int = 64):
    # contour from -eps to +eps through the upper half plane
    t, w = gauss_legendre(n)
    th = PI / 2 * (t + 1)
    x = epsilon * np.exp(1j * th)
    dx = -1j * x * (PI / 2) * w  # theta runs from pi down to 0
    return x, dx


def _ray_nodes(epsilon, rate, im_w, cutoff, npts):
    """Gauss-Legendre panels on [epsilon, X] with geometric growth."""
    if cutoff is None:
        cutoff = epsilon + 44.0 / rate
    hmax = min(8.0, 6.0 / max(abs(im_w), 1e-3), 6.0 / rate)
    edges = [epsilon]
    h = 0.5
    while edges[-1] < cutoff:
        edges.append(edges[-1] + h)
        h = min(1.4 * h, hmax)
    edges = np.array(edges)
    t, w = gauss_legendre(npts)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wx = (half[:, None] * w[None, :]).ravel()
    return x, wx


def _strip_integral(r, z, spec: ContourSpec, deriv=False):
    """Contour integral for z inside the strip, vectorized over z."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = 2 * z - PI
    s = PI + 2 * PI / r
    rate = float(np.min(s - np.abs(w.real)))
    if rate <= 0:
        raise ValueError("phi_r: argument outside the convergence strip")
    im_w = float(np.max(np.abs(w.imag)))
    xr, wr = _ray_nodes(spec.epsilon, rate, im_w, spec.cutoff, spec.panels)
    xs, ds = _semicircle(spec.epsilon)
    den_r = xr * (-np.expm1(-2 * PI * xr)) * (-np.expm1(-4 * PI * xr / r))
    out = np.empty(z.shape, dtype=complex)
    chunk = max(1, 4_000_000 // (xr.size + xs.size))
    for lo in range(0, z.size, chunk):
        ww = w[lo:lo + chunk, None]
        e1 = np.exp((ww - s) * xr[None, :])
        e2 = np.exp((-ww - s) * xr[None, :])
        if deriv:
            # d/dz of the integrand multiplies it by 2x; rays combine to cosh
            ray = ((e1 + e2) * (xr * 2 / den_r * wr)[None, :]).sum(axis=1)
            semi = (2 * xs * np.exp(ww * xs[None, :])
                    / (4 * xs * np.sinh(PI * xs) * np.sinh(2 * PI * xs / r))
                    * ds).sum(axis=1)
        else:
            ray = ((e1 - e2) * (wr / den_r)[None, :]).sum(axis=1)
            semi = (np.exp(ww * xs[None, :])
                    / (4 * xs * np.sinh(PI * xs) * np.sinh(2 * PI * xs / r))
                    * ds).sum(axis=1)
        out[lo:lo + chunk] = ray + semi
    return 4j * PI / r * out


def _pole_distance(r, z):
    """Distance from z to the nearest pole of phi_r."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    d = np.full(z.shape, np.inf)
    u = z.real * r / PI
    for sign in (1, -1):
        # right poles (a+1)r + b, left poles -(a r + b), b odd positive
        v = sign * u
        base = np.round(v)
        for cand in (base - 1, base, base + 1):
            ok = np.zeros(z.shape, dtype=bool)
            for a in range(int(max(1, np.max(np.abs(u)) // r + 2))):
                b = cand - ((a + 1) * r if sign > 0 else a * r)
                ok |= (b >= 1) & (np.mod(b, 2) == 1)
            pole = sign * cand * PI / r
            dd = np.hypot(z.real - pole, z.imag)
            d = np.where(ok, np.minimum(d, dd), d)
    return d


def _log1m_e2i(w):
    return np.log1p(-np.exp(2j * w))


def phi_r(r, z, spec: ContourSpec | None = None, method: str = "auto"):
    """Quantum dilogarithm phi_r(z).

    method="quad" integrates directly (z must lie in the strip);
    method="auto" first moves z into Re z in [pi/4, 3pi/4] with the
    shift relation and then integrates.  Outside the strip the value is
    continued with principal logarithms, so there it is determined modulo
    8 pi^2 / r (exp(r/(4 pi i) phi_r) is unaffected).
    """
    r = _check_r(r)
    spec = spec or ContourSpec()
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex)).copy()
    if np.any(_pole_distance(r, z) < 1e-6):
        raise ValueError("phi_r: argument too close to a pole")
    step = 2 * PI / r
    lo_edge, hi_edge = -PI / r, PI + PI / r
    corr = np.zeros(z.shape, dtype=complex)
    if method == "quad":
        if np.any((z.real <= lo_edge) | (z.real >= hi_edge)):
            raise ValueError("phi_r(method='quad'): argument outside the strip")
        val = _strip_integral(r, z, spec)
        return complex(val[0]) if scalar else val
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    target_lo, target_hi = PI / 4, 3 * PI / 4
    # below the band: phi(z) = phi(z + 2pi/r) + (4 pi i/r) log(1 - e^{2i(z+pi/r)})
    while True:
        m = z.real < target_lo
        if not m.any():
            break
        corr[m] += 4j * PI / r * _log1m_e2i(z[m] + PI / r)
        z[m] += step
    # above the band: phi(z) = phi(z - 2pi/r) - (4 pi i/r) log(1 - e^{2i(z-pi/r)})
    while True:
        m = z.real > target_hi
        if not m.any():
            break
        corr[m] -= 4j * PI / r * _log1m_e2i(z[m] - PI / r)
        z[m] -= step
    val = _strip_integral(r, z, spec) + corr
    return complex(val[0]) if scalar else val


def phi_r_prime(r, z, spec: ContourSpec | None = None):
    """phi_r'(z), differentiating under the integral sign (0 < Re z < pi)."""
    r = _check_r(r)
    spec = spec or ContourSpec()
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=complex)).copy()
    if np.any((z.real <= 0) | (z.real >= PI)):
        raise ValueError("phi_r_prime: need 0 < Re z < pi")
    step = 2 * PI / r
    corr = np.zeros(z.shape, dtype=complex)

    def dlog(w):
        e = np.exp(2j * w)
        return 4j * PI / r * (-2j * e / (1 - e))

    while True:
        m = z.real < PI / 4
        if not m.any():
            break
        corr[m] += dlog(z[m] + PI / r)
        z[m] += step
    while True:
        m = z.real > 3 * PI / 4
        if not m.any():
            break
        corr[m] -= dlog(z[m] - PI / r)
        z[m] -= step
    val = _strip_integral(r, z, spec, deriv=True) + corr
    return complex(val[0]) if scalar else val


def phi_r_asymptotic(r, z):
    """Two-term expansion Li2(e^{2iz}) + 2 pi^2 e^{2iz} / (3 (1 - e^{2iz}) r^2)."""
    e = np.exp(2j * np.asarray(z, dtype=complex))
    return li2(e) + 2 * PI**2 * e / (3 * (1 - e)) / r**2


def qpochhammer(r, n):
    """(t)_n = prod_{k=1}^n (1 - t^k), t = exp(4 pi i / r)."""
    k = np.arange(1, n + 1)
    return complex(np.prod(1 - np.exp(4j * PI * k / r)))
