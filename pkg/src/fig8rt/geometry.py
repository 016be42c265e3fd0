"""Hyperbolic structure on p/q fillings of the figure-8 knot.

The potential

    V^+(x, y) = (-p x^2 + 2 pi x)/q - 2 pi x + 4 x y
                - Li2(e^{-2i(y+x)}) + Li2(e^{2i(y-x)}) - p' pi^2 / q

has a unique critical point (x0, y0) with 0 < Re(y0 +- x0) < pi/2 whose
shapes A = e^{2i(y0+x0)}, B = e^{2i(y0-x0)} solve the gluing equations of
the two-tetrahedron triangulation, and V^+(x0, y0) = i (Vol + i CS) mod pi^2.
V^- is the same with -2 pi x/q; V^+(x, y) = V^-(-x, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import SurgerySlope, dual_pair
from .specfun import PI, VOL_41, li2, lobachevsky


class DomainError(ValueError):
    """Input outside the mathematical domain (non-hyperbolic slope, region)."""


class SolverError(RuntimeError):
    pass


def _slope(slope) -> SurgerySlope:
    return slope if isinstance(slope, SurgerySlope) else SurgerySlope(*slope)


def _sgn(sign) -> int:
    if sign in ("+", 1, +1.0):
        return 1
    if sign in ("-", -1, -1.0):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def in_region(x, y, eps=0.0) -> bool:
    """(x, y) in D_C: eps < Re(y +- x) < pi/2 - eps."""
    u, v = np.real(y + x), np.real(y - x)
    return bool(np.all((eps < u) & (u < PI / 2 - eps) & (eps < v) & (v < PI / 2 - eps)))


def potential_v(sign, slope, x, y, check=True):
    s = _slope(slope)
    sg = _sgn(sign)
    if check and not in_region(x, y):
        raise DomainError("potential_v: point outside D_C")
    pp = dual_pair(s).p_prime
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    val = ((-s.p * x * x + sg * 2 * PI * x) / s.q - 2 * PI * x + 4 * x * y
           - li2(np.exp(-2j * (y + x))) + li2(np.exp(2j * (y - x)))
           - pp * PI**2 / s.q)
    return complex(val) if val.ndim == 0 else val


def potential_v_closed(sign, slope, x, y):
    """Equivalent form in Li2(e^{2i(y+-x)}) valid on D_C (used as a cross-check)."""
    s = _slope(slope)
    if _sgn(sign) < 0:
        x = -np.asarray(x)
    pp = dual_pair(s).p_prime
    return ((-s.p / s.q - 2) * x * x + 2 * PI * x / s.q - 2 * y * y + 2 * PI * y
            - PI**2 / 3 - pp * PI**2 / s.q
            + li2(np.exp(2j * (y + x))) + li2(np.exp(2j * (y - x))))


def potential_u(x, y):
    """U(x, y) = 4xy - 2 pi x - Li2(e^{-2i(y+x)}) + Li2(e^{2i(y-x)})."""
    return (4 * x * y - 2 * PI * x
            - li2(np.exp(-2j * (y + x))) + li2(np.exp(2j * (y - x))))


def grad_v(sign, slope, x, y, homotopy_t=1.0):
    """(dV/dx, dV/dy).  homotopy_t < 1 shifts dV/dx by -(2 pi/q)(1 - t)."""
    s = _slope(slope)
    sg = _sgn(sign)
    la = np.log1p(-np.exp(-2j * (y + x)))
    lb = np.log1p(-np.exp(2j * (y - x)))
    dx = (-2 * s.p * x + sg * 2 * PI) / s.q - 2 * PI + 4 * y - 2j * la + 2j * lb
    dy = 4 * x - 2j * la - 2j * lb
    dx = dx - sg * (2 * PI / s.q) * (1 - homotopy_t)
    return dx, dy


def hessian_v(sign, slope, x, y):
    """Closed-form Hessian of V^+- and its determinant."""
    s = _slope(slope)
    sg = _sgn(sign)
    xx = sg * x
    ea = np.exp(2j * (y + xx))
    eb = np.exp(2j * (y - xx))
    u = ea / (1 - ea)
    w = eb / (1 - eb)
    h11 = -2 * s.p / s.q - 4 - 4 * u - 4 * w
    h12 = sg * (-4 * u + 4 * w)
    h22 = -4 - 4 * u - 4 * w
    H = np.array([[h11, h12], [h12, h22]], dtype=complex)
    return H, complex(h11 * h22 - h12 * h12)


def shape_logs(x, y):
    """The six shape logarithms on their explicit branches (sign +)."""
    la2 = np.log1p(-np.exp(-2j * (y + x)))
    lb_ = np.log1p(-np.exp(2j * (y - x)))
    return {
        "A": 2j * (y + x),
        "A1": PI * 1j - 2j * (y + x) - la2,
        "A2": la2,
        "B": 2j * (y - x),
        "B1": -lb_,
        "B2": PI * 1j - 2j * (y - x) + lb_,
    }


def shape_logs_minus(x, y):
    """Shape logarithms for the V^- dictionary A = e^{2i(y-x)}, B = e^{2i(y+x)}."""
    la = np.log1p(-np.exp(2j * (y - x)))
    lb = np.log1p(-np.exp(-2j * (y + x)))
    return {
        "A": 2j * (y - x),
        "A1": -la,
        "A2": PI * 1j - 2j * (y - x) + la,
        "B": 2j * (y + x),
        "B1": PI * 1j - 2j * (y + x) - lb,
        "B2": lb,
    }


def gluing_residual(slope, logs) -> float:
    s = _slope(slope)
    e = logs["A"] + 2 * logs["A2"] + logs["B"] + 2 * logs["B2"] - 2j * PI
    d = (s.p * (logs["B1"] - logs["A2"])
         + s.q * (2j * PI - 2 * logs["A"] - 4 * logs["A2"]) - 2j * PI)
    # each shape triple must also multiply to -1 with the stated branches
    ta = logs["A"] + logs["A1"] + logs["A2"] - 1j * PI
    tb = logs["B"] + logs["B1"] + logs["B2"] - 1j * PI
    za = np.exp(logs["A"])
    zb = np.exp(logs["B"])
    rel = [abs(np.exp(logs["A2"]) - (1 - 1 / za)), abs(np.exp(logs["B1"]) - 1 / (1 - zb))]
    return float(max(abs(e), abs(d), abs(ta), abs(tb), *rel))


@dataclass(frozen=True)
class CriticalData:
    slope: SurgerySlope
    x0: complex
    y0: complex
    A: complex
    B: complex
    volume: float
    cs: float
    critical_value: complex  # V^+(x0, y0), unreduced
    hess_det: complex
    holonomy_m: complex
    holonomy_l: complex
    holonomy_core: complex
    residual_c: float
    residual_hg: float
    newton_steps: int


def reduce_cs(cs: float) -> float:
    """Representative of cs mod pi^2 in (-pi^2/2, pi^2/2]."""
    p2 = PI * PI
    red = cs - p2 * math.floor(cs / p2 + 0.5)
    if red <= -p2 / 2:
        red += p2
    return red


def _newton(slope, x, y, t, tol=1e-15, maxit=50):
    steps = 0
    fx, fy = grad_v("+", slope, x, y, t)
    res = math.hypot(abs(fx), abs(fy))
    for _ in range(maxit):
        if res < tol:
            break
        H, det = hessian_v("+", slope, x, y)
        dx = (H[1, 1] * fx - H[0, 1] * fy) / det
        dy = (-H[1, 0] * fx + H[0, 0] * fy) / det
        lam = 1.0
        while lam > 1e-4:
            xn, yn = x - lam * dx, y - lam * dy
            if in_region(xn, yn):
                gx, gy = grad_v("+", slope, xn, yn, t)
                rn = math.hypot(abs(gx), abs(gy))
                if rn < res or rn < tol:
                    break
            lam /= 2
        else:
            break
        x, y, fx, fy = xn, yn, gx, gy
        prev, res = res, rn
        steps += 1
        if res > 0.5 * prev and res < 1e-13:
            break  # round-off floor
    return x, y, res, steps


def solve_critical(slope, nsteps: int = 10) -> CriticalData:
    """Newton continuation from the complete structure (0, pi/6)."""
    s = _slope(slope)
    if not s.hyperbolic:
        raise DomainError(f"slope {s} is exceptional (non-hyperbolic filling)")
    x, y = 0j, PI / 6 + 0j
    t, h = 0.0, 1.0 / nsteps
    total = 0
    trace = []
    while t < 1.0:
        tn = min(1.0, t + h)
        xn, yn, res, steps = _newton(s, x, y, tn)
        trace.append((tn, res))
        if res < 1e-12:
            x, y, t = xn, yn, tn
            total += steps
        else:
            h /= 2
            if h < 1e-6:
                raise SolverError(f"continuation stalled for {s}: {trace[-5:]}")
    fx, fy = grad_v("+", s, x, y)
    res_c = math.hypot(abs(fx), abs(fy))
    A = complex(np.exp(2j * (y + x)))
    B = complex(np.exp(2j * (y - x)))
    if not (A.imag > 0 and B.imag > 0):
        raise SolverError(f"non-geometric solution for {s}: A={A}, B={B}")
    logs = shape_logs(x, y)
    res_hg = gluing_residual(s, logs)
    val = potential_v("+", s, x, y)
    cv = -1j * val
    _, det = hessian_v("+", s, x, y)
    hm, hl, hc = holonomy_triple(s, x)
    return CriticalData(s, complex(x), complex(y), A, B, float(cv.real),
                        reduce_cs(float(cv.imag)), val, det, hm, hl, hc,
                        res_c, res_hg, total)


def holonomy_triple(slope, x0):
    s = _slope(slope)
    d = dual_pair(s)
    hm = 2j * x0
    hl = (2j * PI - s.p * hm) / s.q
    hc = d.q_prime * hm - d.p_prime * hl
    return complex(hm), complex(hl), complex(hc)


def holonomies(slope, critical: CriticalData):
    """(H(m), H(l), H(core)) from the critical point."""
    return holonomy_triple(slope, critical.x0)


def holonomies_from_shapes(slope, critical: CriticalData):
    """Meridian and longitude holonomies read off the shape logarithms."""
    lg = shape_logs(critical.x0, critical.y0)
    return complex(lg["B1"] - lg["A2"]), complex(2j * PI - 2 * lg["A"] - 4 * lg["A2"])


def yoshida_check(slope, critical: CriticalData) -> float:
    """Recombine Vol + i CS from Phi(H(m)), H(m)H(l) and H(core); return the
    discrepancy against -i V^+(x0, y0), reduced mod pi^2 in the imaginary part.

    Holonomies here come from the shape logarithms, not from x0 directly.
    """
    s = _slope(slope)
    d = dual_pair(s)
    hm, hl = holonomies_from_shapes(s, critical)
    hc = d.q_prime * hm - d.p_prime * hl
    phi = potential_u(critical.x0, critical.y0)
    total = phi / 1j - hm * hl / 4j - PI * hc / 2
    diff = total - (-1j * critical.critical_value)
    im = reduce_cs(diff.imag)
    return float(math.hypot(diff.real, im))


VACUOUS_THRESHOLD = 4 * PI * PI


def fkp_lower_bound(slope):
    """(1 - 4 pi^2 / L^2)^{3/2} Vol(4_1), L^2 = p^2 + 12 q^2.

    Returns (bound, vacuous_flag); the bound is 0 when L^2 <= 4 pi^2.
    """
    s = _slope(slope)
    L2 = s.p * s.p + 12 * s.q * s.q
    if L2 <= VACUOUS_THRESHOLD:
        return 0.0, True
    return (1 - VACUOUS_THRESHOLD / L2) ** 1.5 * VOL_41, False


def fkp_half_volume_threshold() -> float:
    """Slope length squared beyond which the bound exceeds Vol(4_1)/2."""
    return VACUOUS_THRESHOLD / (1 - 0.5 ** (2 / 3))


SMALL_PAIRS = ((6, 1), (7, 1), (8, 1), (9, 1), (1, 2), (3, 2), (5, 2), (7, 2))


def hyperbolic_slopes(pmax: int, qmax: int):
    out = []
    for q in range(1, qmax + 1):
        for p in range(-pmax, pmax + 1):
            if math.gcd(abs(p), q) != 1:
                continue
            s = SurgerySlope(p, q)
            if s.hyperbolic:
                out.append(s)
    return out


def complete_value():
    """U(0, pi/6) = 4 i Lambda(pi/6): the complete structure."""
    return complex(potential_u(0.0, PI / 6)), 4j * lobachevsky(PI / 6)
