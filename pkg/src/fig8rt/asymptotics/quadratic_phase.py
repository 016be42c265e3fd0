"""Stationary-phase test integrals in one and two variables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..arith import SurgerySlope, expand_negative_cf
from ..geometry import hessian_v, potential_v, solve_critical
from ..specfun import PI, gauss_legendre
from .fourier import fourier_leading, leading_prefactor
from .regions import DEFAULT_DELTA, Region, reduced_sign, x1_closed
from .saddle import continued_sqrt_det


class LemmaHypothesisError(ValueError):
    pass


def composite_gl(f, a, b, panels: int, order: int = 32) -> complex:
    """Composite Gauss-Legendre rule for a smooth (possibly oscillatory) f."""
    t, w = gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    x = mid + half * t[None, :]
    vals = f(x) * (half * w[None, :])
    return complex(math.fsum(vals.real.ravel()), math.fsum(vals.imag.ravel()))


def _oscillatory(f, a, b, rate: float, tol: float = 1e-12) -> complex:
    """Integrate f on [a, b], refining panels until successive values agree.

    The tolerance is relative to the integral of |f|, so cancelling integrals converge too.
    """
    panels = max(4, int(rate * (b - a) / 8) + 4)
    prev = composite_gl(f, a, b, panels)
    for _ in range(12):
        panels *= 2
        cur = composite_gl(f, a, b, panels)
        scale = abs(composite_gl(lambda x: np.abs(f(x)), a, b, panels))
        if abs(cur - prev) <= tol * max(scale, 1e-300):
            return cur
        prev = cur
    raise RuntimeError("oscillatory quadrature did not converge")


def gaussian_phase_integral(a, b, alpha, beta, gamma, r) -> tuple[complex, complex]:
    """int_a^b sin(x + beta) exp(r/(4 pi i) gamma (x - alpha)^2) dx and its leading term.

    The leading term 2 pi sin(alpha + beta)/(sqrt(r) sqrt(i gamma)) applies
    when alpha lies inside (a, b); outside it is 0 (the integral is O(1/r)).
    """
    if not a < b:
        raise ValueError("need a < b")
    if r < 3:
        raise ValueError("need r >= 3")
    if gamma == 0 or np.imag(gamma) != 0:
        raise ValueError("gamma must be a nonzero real")
    gamma = float(np.real(gamma))
    lam = r * gamma / (4j * PI)

    def f(x):
        return np.sin(x + beta) * np.exp(lam * (x - alpha) ** 2)

    interior = a < np.real(alpha) < b
    if interior:
        s = np.sin(alpha + beta)
        if abs(s) < 1e-14:
            raise LemmaHypothesisError("sin(alpha + beta) = 0 in the interior case")
        leading = complex(2 * PI * s / (math.sqrt(r) * np.sqrt(1j * gamma)))
    else:
        leading = 0j
    rate = abs(r * gamma) / (4 * PI) * 2 * max(abs(a - np.real(alpha)), abs(b - np.real(alpha)))
    return _oscillatory(f, a, b, rate), leading


def pure_gaussian(eps: float, r: float) -> tuple[float, float]:
    """(int_{-eps}^{eps} exp(-r z^2) dz, sqrt(pi/r))."""
    t, w = gauss_legendre(max(64, int(8 * eps * math.sqrt(r)) + 64))
    z = eps * t
    return float(eps * np.dot(w, np.exp(-r * z * z))), math.sqrt(PI / r)


def error_order(r_values, errors) -> float:
    """Slope of log(error) against log(1/sqrt r)."""
    x = np.log(1 / np.sqrt(np.asarray(r_values, dtype=float)))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


# ---------------------------------------------------------------------------
# two-dimensional saddle point


@dataclass(frozen=True)
class Saddle2DReport:
    case: str
    r: float
    numeric: complex
    leading: complex
    relative_error: float
    reference: complex | None = None  # an independent value of the same integral
    reference_error: float | None = None


def _square_integral(f, half: float, n: int) -> complex:
    t, w = gauss_legendre(n)
    z = half * t
    vals = f(z[:, None], z[None, :]) * (half * half) * w[:, None] * w[None, :]
    return complex(math.fsum(vals.real.ravel()), math.fsum(vals.imag.ravel()))


def _quadratic_case(g, r, half=1.0):
    """int_{[-half, half]^2} g exp(r (-z1^2 - z2^2)) vs g(0) (2 pi/r)/sqrt(det 2I)."""
    n = max(64, int(6 * half * math.sqrt(r)) + 64)
    numeric = _square_integral(lambda z1, z2: g(z1, z2) * np.exp(-r * (z1**2 + z2**2)), half, n)
    leading = complex(g(0.0, 0.0)) * (2 * PI / r) / math.sqrt(4.0)
    return numeric, leading


def _vplus_case(slope, r, nodes, delta):
    """sum over D of 2 sin(x_1(x)) exp(r/(4 pi i) V(x, y)) with the limiting potential."""
    s = slope if isinstance(slope, SurgerySlope) else SurgerySlope(*slope)
    cf = expand_negative_cf(s)
    sign = "+" if reduced_sign(cf, 0) > 0 else "-"
    crit = solve_critical(s)
    reg = Region("D", delta / 2)
    t, wt = gauss_legendre(nodes)
    (u0, u1), (v0, v1) = reg.u_range, reg.v_range
    u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * t
    v = 0.5 * (v0 + v1) + 0.5 * (v1 - v0) * t
    U, Vv = u[:, None], v[None, :]
    x, y = 0.5 * (U - Vv), 0.5 * (U + Vv)
    w = 0.125 * (u1 - u0) * (v1 - v0) * wt[:, None] * wt[None, :]
    vals = (2 * np.sin(x1_closed(s, x, 0)) * np.exp(r / (4j * PI) * potential_v(sign, s, x, y, check=False))
            * w)
    pref = leading_prefactor(s, r)
    numeric = pref * complex(math.fsum(vals.real.ravel()), math.fsum(vals.imag.ravel()))
    xc = crit.x0 if sign == "+" else -crit.x0  # V^-(x, y) = V^+(-x, y)
    H, _ = hessian_v(sign, s, xc, crit.y0)
    sq, _ = continued_sqrt_det(H)
    g0 = 2 * np.sin(x1_closed(s, xc, 0))
    leading = pref * g0 * 8 * PI**2 / (r * sq) * np.exp(r / (4j * PI) * crit.critical_value)
    return complex(numeric), complex(leading)


def verify_saddle_2d(case: str = "quadratic", r: float = 101, slope=(5, 2),
                     nodes: int | None = None, delta: float = DEFAULT_DELTA) -> Saddle2DReport:
    """Numeric 2D integral against the saddle-point leading term.

    case "quadratic": f = -z1^2 - z2^2, g = 1 + z1 (leading term exact).
    case "quadratic2": same f with g = 1 + z1^2 (relative error 1/(2r)).
    case "vplus": the leading Fourier integrand with the limiting potential;
    the reference is hat f_r(0,..,0) from fourier_leading.
    """
    if case == "quadratic":
        num, lead = _quadratic_case(lambda z1, z2: 1 + z1 + 0 * z2, r)
        return Saddle2DReport(case, r, num, lead, abs(num / lead - 1))
    if case == "quadratic2":
        num, lead = _quadratic_case(lambda z1, z2: 1 + z1**2 + 0 * z2, r)
        return Saddle2DReport(case, r, num, lead, abs(num / lead - 1))
    if case == "vplus":
        n = nodes or max(160, 3 * int(r))
        num, lead = _vplus_case(slope, int(r), n, delta)
        ref = fourier_leading(slope, int(r), delta=delta).f0
        return Saddle2DReport(case, r, num, lead, abs(num / lead - 1), ref, abs(ref / lead - 1))
    raise ValueError(f"unknown case {case!r}")
