"""Saddle-point prediction for RT_r and the convergence table.

Both leading Fourier coefficients localize at the critical point of the
reduced potential and contribute equally, giving

    RT_r ~ kappa_r * C * r^{(k+1)/2} * exp(r/(4 pi i) V(c)),
    C = 8 exp(i pi (k-1)/4) sin(x_1(c)) / (sqrt(q) sqrt(-det Hess V(c))),

where V(c) = i (Vol + i CS) is the unreduced critical value and
x_1(c) = (p' pi - x0)/q.  The factor exp(-i x) of the integrand cancels
against the first-order shift of the quantum dilogarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..arith import SurgerySlope, dual_pair, expand_negative_cf, linking_signature
from ..geometry import CriticalData, hessian_v, reduce_cs, solve_critical
from ..rt_exact import DEFAULT_TERM_BUDGET, build_root_data, rt_symmetrized
from ..specfun import PI


class SaddleError(RuntimeError):
    pass


def _slope(slope) -> SurgerySlope:
    return slope if isinstance(slope, SurgerySlope) else SurgerySlope(*slope)


def continued_sqrt_det(H: np.ndarray, steps: int = 200) -> tuple[complex, str]:
    """sqrt(det(i H)) continued from the real part of i H.

    Along M(s) = Re(iH) + i s Im(iH), s in [0, 1], the square root is tracked
    continuously starting from the positive root of det Re(iH).  Requires
    Re(iH) positive definite; otherwise the principal root is returned.
    """
    A = 1j * np.asarray(H, dtype=complex)
    re = A.real
    if np.all(np.linalg.eigvalsh(re) > 0):
        root = math.sqrt(float(np.linalg.det(re)))
        for s in np.linspace(0.0, 1.0, steps + 1)[1:]:
            d = complex(np.linalg.det(re + 1j * s * A.imag))
            cand = np.sqrt(d)
            root = cand if abs(cand - root) <= abs(cand + root) else -cand
        return complex(root), "continued"
    return complex(np.sqrt(complex(np.linalg.det(A)))), "principal"


@dataclass(frozen=True)
class SaddlePrediction:
    value: complex
    log_value: complex  # continuous-in-r branch of log(value)
    C: complex
    kappa: complex
    sqrt_det: complex  # sqrt(-det Hess V) on the continued branch
    branch: str
    sin_factor: complex


def kappa_log(cf, r) -> complex:
    """log kappa_r in closed form, phase unreduced and continuous in r."""
    k = cf.k
    sigma = linking_signature(cf)
    sa = sum(cf.a)
    s2 = math.sin(2 * PI / r)
    mu = s2 / math.sqrt(r)
    modulus = (k - 1) * math.log(2) + (k + 1) * math.log(mu) - k * math.log(2 * s2) - math.log(s2)
    # -1 * (-1)^k, 1/i^k, twist^{-sigma}, and the collected constant
    phase = PI * (k + 1) - k * PI / 2
    phase += sigma * (3 / r + (r + 1) / 4) * PI
    phase += PI * (sa * (0.75 * r - 1.0 / r) + (k - 1) * r / 2)
    return complex(modulus, phase)


def saddle_prediction(slope, r, critical: CriticalData | None = None) -> SaddlePrediction:
    s = _slope(slope)
    cf = expand_negative_cf(s)
    k = cf.k
    crit = critical or solve_critical(s)
    pp = dual_pair(s).p_prime
    H, _ = hessian_v("+", s, crit.x0, crit.y0)
    sq, branch = continued_sqrt_det(H)
    sinf = complex(np.sin((pp * PI - crit.x0) / s.q))
    if abs(sinf) < 1e-12:
        raise SaddleError("vanishing sine factor at the critical point")
    C = 8 * np.exp(1j * PI * (k - 1) / 4) * sinf / (math.sqrt(s.q) * sq)
    cv = crit.critical_value  # i (Vol + i CS), unreduced
    log_pred = (kappa_log(cf, r) + np.log(C) + (k + 1) / 2 * math.log(r)
                + r / (4j * PI) * cv)
    # the value uses the closed-form kappa_r phase, independent of the state-sum code
    value = np.exp(log_pred)
    return SaddlePrediction(complex(value), complex(log_pred), complex(C),
                            complex(np.exp(kappa_log(cf, r))), sq, branch, sinf)


# ---------------------------------------------------------------------------
# convergence table


@dataclass(frozen=True)
class ConvergenceRecord:
    r: int
    rt_log_scaled: complex  # (4 pi / r) log RT_r on the prediction-guided branch
    target: complex  # Vol + i (CS + n pi^2)
    residual: float
    saddle_ratio: complex
    pi2_shift: int  # the multiple n of pi^2 chosen for the target
    tv_scaled: float  # (2 pi / r) log tv_proxy
    tv_residual: float  # |(2 pi / r) log tv_proxy - Vol|
    rt_abs_log: float  # log |RT_r|


def align_pi2(z: complex, vol: float, cs: float) -> tuple[complex, int]:
    """Target Vol + i(cs + n pi^2) with n minimizing the distance to z."""
    n = round((z.imag - cs) / PI**2)
    return complex(vol, cs + n * PI**2), int(n)


def convergence_record(slope, r, critical: CriticalData | None = None,
                       budget: int = DEFAULT_TERM_BUDGET) -> ConvergenceRecord:
    s = _slope(slope)
    crit = critical or solve_critical(s)
    inv = rt_symmetrized(s, build_root_data(r), budget=budget)
    pred = saddle_prediction(s, r, crit)
    ratio = inv.value / pred.value
    log_rt = pred.log_value + np.log(ratio)
    scaled = 4 * PI / r * log_rt
    target, n = align_pi2(scaled, crit.volume, crit.cs)
    tv_scaled = 2 * PI / r * 2 * inv.log_abs
    return ConvergenceRecord(r, complex(scaled), target, abs(scaled - target), complex(ratio),
                             n, tv_scaled, abs(tv_scaled - crit.volume), inv.log_abs)


def convergence_table(slope, r_list, budget: int = DEFAULT_TERM_BUDGET) -> list[ConvergenceRecord]:
    s = _slope(slope)
    crit = solve_critical(s)
    return [convergence_record(s, r, crit, budget) for r in r_list]


@dataclass(frozen=True)
class ResidualFit:
    a: float
    b: float
    relative_residual: float  # ||res - fit|| / ||res||


def fit_residuals(r_values, residuals) -> ResidualFit:
    """Least-squares fit residual ~ (a log r + b)/r."""
    r = np.asarray(r_values, dtype=float)
    y = np.asarray(residuals, dtype=float)
    A = np.column_stack([np.log(r) / r, 1 / r])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    rel = float(np.linalg.norm(A @ coef - y) / np.linalg.norm(y))
    return ResidualFit(float(coef[0]), float(coef[1]), rel)


def smoothed_decreasing(values, window: int = 3) -> bool:
    """True if the moving average over ``window`` entries is nonincreasing."""
    v = np.asarray(values, dtype=float)
    if v.size < window:
        return bool(np.all(np.diff(v) <= 0))
    sm = np.convolve(v, np.ones(window) / window, mode="valid")
    return bool(np.all(np.diff(sm) <= 0))


def reduced_target(crit: CriticalData) -> complex:
    return complex(crit.volume, reduce_cs(crit.cs))
