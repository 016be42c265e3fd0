"""Acceptance battery shared by the CLI and the test suite.

Each criterion returns a ``Check`` with the measured values that decided
it.  ``quick=True`` shrinks the r ranges to r <= 51.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import arith, geometry, rt_exact, specfun
from .asymptotics import fourier, quadratic_phase, regions, saddle

PI = specfun.PI


@dataclass
class Check:
    criterion: str
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        vals = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{status}] {self.criterion} {self.title}: {vals}"


def _fmt(v):
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return f"{v:.4g}"
    if isinstance(v, complex):
        return f"{v.real:.4g}{v.imag:+.4g}j"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _odd_range(lo, hi, step=2):
    return list(range(lo | 1, hi + 1, step))


# ---------------------------------------------------------------------------
# criteria


def cross_formula(quick=False) -> Check:
    slopes = [(5, 1), (5, 2), (7, 2), (7, 3)]
    rs = _odd_range(5, 21 if quick else 31)
    worst = 0.0
    for pq in slopes:
        for r in rs:
            rd = rt_exact.build_root_data(r)
            a = rt_exact.rt_symmetrized(pq, rd).value
            b = rt_exact.rt_direct(pq, rd).value
            worst = max(worst, abs(a - b) / abs(b))
    return Check("1", "symmetrized vs direct state sum", worst < 1e-9,
                 {"max_rel_diff": worst, "r_max": rs[-1]})


def arithmetic_identities(quick=False) -> Check:
    pmax, qmax = (60, 8) if quick else (200, 20)
    bad, count = [], 0
    for q in range(1, qmax + 1):
        for p in range(-pmax, pmax + 1):
            if math.gcd(abs(p), q) != 1:
                continue
            cf = arith.expand_negative_cf(p, q)
            d = arith.dual_pair(p, q)
            count += 1
            if arith.evaluate_cf(cf) != Fraction(p, q) or arith.cf_sum_identity(cf) != Fraction(-d.p_prime, q):
                bad.append((p, q))
    return Check("2", "sum 1/(c_{j-1} c_j) = -p'/q", not bad,
                 {"slopes": count, "failures": len(bad)})


def dilogarithm_battery(quick=False) -> Check:
    worst_eq, worst_fac = 0.0, 0.0
    rs = (5, 7, 11) if quick else (5, 7, 11, 21)
    zs = [PI / 3, PI / 4 + 0.1j, 0.5 - 0.2j, 2.0 + 0.05j]
    for r in rs:
        lam = r / (4j * PI)
        for z in zs:
            lhs = np.exp(lam * (specfun.phi_r(r, z - PI / r) - specfun.phi_r(r, z + PI / r)))
            rhs = 1 - np.exp(2j * z)
            worst_eq = max(worst_eq, abs(lhs - rhs) / abs(rhs))
        for z in [PI / (2 * r), 0.3 + 0.1j, 1.1 - 0.05j]:
            lhs = np.exp(lam * (specfun.phi_r(r, z) - specfun.phi_r(r, z + PI)))
            rhs = 1 + np.exp(1j * r * z)
            worst_eq = max(worst_eq, abs(lhs - rhs) / abs(rhs))
        p0 = specfun.phi_r(r, PI / r)
        for n in range(0, r - 1):
            exact = specfun.qpochhammer(r, n)
            one = np.exp(lam * (p0 - specfun.phi_r(r, 2 * PI * n / r + PI / r)))
            worst_fac = max(worst_fac, abs(one - exact) / abs(exact))
            if n >= (r - 1) // 2 + 1:
                two = 2 * np.exp(lam * (p0 - specfun.phi_r(r, 2 * PI * n / r + PI / r - PI)))
                worst_fac = max(worst_fac, abs(two - exact) / abs(exact))
    r_fit = [11, 21, 41, 81]
    errs = []
    for r in r_fit:
        e = max(abs(specfun.phi_r(r, z) - specfun.phi_r_asymptotic(r, z))
                for z in (PI / 2, PI / 3 + 0.1j, 2 * PI / 3 - 0.1j))
        errs.append(e)
    order = float(np.polyfit(np.log(1 / np.square(r_fit)), np.log(errs), 1)[0])
    ok = worst_eq < 1e-8 and worst_fac < 1e-8 and order >= 1.9
    return Check("3", "quantum dilogarithm identities and asymptotics", ok,
                 {"shift_eqs": worst_eq, "factorials": worst_fac, "order_in_1/r^2": order})


def geometry_solver(quick=False) -> Check:
    slopes = geometry.hyperbolic_slopes(8 if quick else 12, 2 if quick else 3)
    worst = {"res_c": 0.0, "res_hg": 0.0, "yoshida": 0.0}
    min_det, fkp_margin, shapes_ok = math.inf, math.inf, True
    for s in slopes:
        c = geometry.solve_critical(s)
        worst["res_c"] = max(worst["res_c"], c.residual_c)
        worst["res_hg"] = max(worst["res_hg"], c.residual_hg)
        worst["yoshida"] = max(worst["yoshida"], geometry.yoshida_check(s, c))
        min_det = min(min_det, abs(c.hess_det))
        shapes_ok &= c.A.imag > 0 and c.B.imag > 0
        bound, _ = geometry.fkp_lower_bound(s)
        fkp_margin = min(fkp_margin, c.volume - bound)
    small = min(geometry.solve_critical(pq).volume for pq in geometry.SMALL_PAIRS)
    half = specfun.VOL_41 / 2
    ok = (worst["res_c"] < 1e-12 and worst["res_hg"] < 1e-10 and shapes_ok
          and min_det > 1e-6 and worst["yoshida"] < 1e-9 and fkp_margin >= 0 and small > half)
    return Check("4", "gluing-equation solver", ok,
                 {"slopes": len(slopes), **worst, "min_|det|": min_det, "fkp_margin": fkp_margin,
                  "small_pairs_min_vol": small, "half_vol_41": half})


def _table(quick):
    rs = [21, 31, 41, 51] if quick else list(range(51, 302, 50))
    return rs, saddle.convergence_table((5, 2), rs)


def volume_conjecture(quick=False, table=None) -> Check:
    rs, rows = table or _table(quick)
    res = [row.residual for row in rows]
    fit = saddle.fit_residuals(rs, res)
    shifts = {row.pi2_shift for row in rows}
    ok = res[-1] < res[0] and fit.relative_residual < 0.2
    return Check("5", "(4 pi/r) log RT_r -> Vol + i CS for 5/2", ok,
                 {"r": (rs[0], rs[-1]), "residual": (res[0], res[-1]),
                  "fit_rel_residual": fit.relative_residual, "fit_a": fit.a, "fit_b": fit.b,
                  "pi2_shifts": sorted(shifts)})


def saddle_ratio(quick=False, table=None) -> Check:
    if table is None:
        rs = [21, 31, 41, 51] if quick else [51, 101, 151, 201]
        rows = saddle.convergence_table((5, 2), rs)
    else:
        rs, rows = table
        keep = [i for i, r in enumerate(rs) if r <= 201]
        rs, rows = [rs[i] for i in keep], [rows[i] for i in keep]
    dev = [abs(row.saddle_ratio - 1) for row in rows]
    ok = dev[-1] < dev[0] and dev[-1] < 0.25
    return Check("6", "saddle-point prefactor for 5/2", ok,
                 {"r": (rs[0], rs[-1]), "|ratio-1|": dev})


def fourier_pipeline(quick=False) -> Check:
    r_lead = 51 if quick else 101
    lead = fourier.fourier_leading((5, 2), r_lead)
    inv = rt_exact.rt_symmetrized((5, 2), rt_exact.build_root_data(r_lead)).value
    rel = abs(lead.approx_invariant / inv - 1)
    r_tail = 31 if quick else 51
    vol = geometry.solve_critical((5, 2)).volume
    idx = list(fourier._window(expand_k((5, 2)), 1))
    coeffs = fourier.fourier_coefficients_full((5, 2), r_tail, idx)
    top = max(abs(coeffs[i]) for i in idx if fourier.is_leading(i))
    expo = {i: vol + 4 * PI / r_tail * math.log(abs(c) / top) for i, c in coeffs.items()}
    worst = max((e, i) for i, e in expo.items() if not fourier.is_leading(i))
    ok = rel < 0.2 and worst[0] < vol - 0.05
    return Check("7", "Fourier coefficients for 5/2", ok,
                 {"r_leading": r_lead, "rel_err_leading": rel, "|f0/f1|": abs(lead.f0 / lead.f1),
                  "r_tail": r_tail, "max_nonleading_exponent": worst[0],
                  "at_index": worst[1], "vol_minus_0.05": vol - 0.05})


def expand_k(pq) -> int:
    return arith.expand_negative_cf(pq).k


def appendix_numerics(quick=False) -> Check:
    rs = [64, 256, 1024]
    errs = []
    for r in rs:
        num, lead = quadratic_phase.gaussian_phase_integral(-1, 1, 0, PI / 2, 1, r)
        errs.append(abs(num / lead - 1))
    order = quadratic_phase.error_order(rs, errs)
    ext = [abs(quadratic_phase.gaussian_phase_integral(-1, 1, 2, PI / 2, 1, r)[0]) * r
           for r in (64, 256, 1024, 4096)]
    g, ref = quadratic_phase.pure_gaussian(0.5, 400)
    q1 = quadratic_phase.verify_saddle_2d("quadratic", 101).relative_error
    q2 = quadratic_phase.verify_saddle_2d("quadratic2", 101).relative_error
    ok = (order >= 0.45 and max(ext) < 2 * min(ext) + 10 and q1 < 1e-6
          and abs(q2 * 101 - 0.5) < 1e-3 and abs(g - ref) < 1e-12)
    return Check("8", "stationary-phase lemmas", ok,
                 {"interior_order": order, "exterior_|I|*r": ext, "pure_gaussian_err": abs(g - ref),
                  "quadratic_rel_err": q1, "quadratic2_r*err": q2 * 101})


def figure8_constants(quick=False) -> Check:
    lam = specfun.lobachevsky
    vol = 6 * lam(PI / 3)
    th = np.linspace(-4, 4, 1000)
    odd = float(np.max(np.abs(lam(-th) + lam(th))))
    per = float(np.max(np.abs(lam(th + PI) - lam(th))))
    dup = float(np.max(np.abs(0.5 * lam(2 * th) - lam(th) - lam(th + PI / 2))))
    ident = abs(lam(PI / 6) - 1.5 * lam(PI / 3))
    ok = abs(vol - 2.029883) < 1e-5 and max(odd, per, dup, ident) < 1e-12
    return Check("9", "Lobachevsky constants", ok,
                 {"6Lambda(pi/3)": float(vol), "pi/6_identity": float(ident), "odd": odd,
                  "periodic": per, "duplication": dup})


def tv_trend(quick=False, table=None) -> Check:
    rs, rows = table or _table(quick)
    res = [row.tv_residual for row in rows]
    return Check("10", "(2 pi/r) log TV_r -> Vol for 5/2", res[-1] < res[0],
                 {"r": (rs[0], rs[-1]), "tv_residual": (res[0], res[-1])})


# ---------------------------------------------------------------------------
# supplementary properties


def supplementary(quick=False) -> list[Check]:
    out = []
    t = time.perf_counter()
    rs = [51, 101, 201]
    ratios = [rt_exact.factorial_log_defect(r) / math.log(r) for r in rs]
    out.append(Check("P1", "log|{n}!| + (r/2pi) Lambda(2 pi n/r) = O(log r)",
                     max(ratios) < 1.0 and max(ratios) - min(ratios) < 0.1,
                     {"C(r)": ratios}, time.perf_counter() - t))
    t = time.perf_counter()
    r = 51 if quick else 101
    rd = rt_exact.build_root_data(r)
    top = rt_exact.tail_log_max((5, 2), rd, regions.DEFAULT_DELTA)
    expo = r / (4 * PI) * (specfun.VOL_41 / 2 + 0.05)
    slack = 2 * rt_exact.factorial_log_defect(r)
    out.append(Check("P2", "off-window |g_r| within e^{(r/4pi)(Vol(4_1)/2+eps)} up to the factorial error",
                     top - expo <= slack, {"r": r, "log_max": top, "exponent": expo, "slack": slack}))
    t = time.perf_counter()
    margins = {pq: regions.interior_lemma_scan(pq, 51) for pq in [(5, 2), (7, 3), (7, 2), (13, 5)]}
    out.append(Check("P3", "completions x_i(x) stay inside (-pi + c pi/r, pi - c pi/r)",
                     min(margins.values()) >= -regions.MARGIN_TOL, {"min_margin": min(margins.values())},
                     time.perf_counter() - t))
    t = time.perf_counter()
    tested, failed = 0, []
    for pq in [(5, 2), (7, 3), (7, 2), (13, 5)]:
        cf = arith.expand_negative_cf(pq)
        q = arith.SurgerySlope(*pq).q
        for n in itertools.product(range(-2, 3), repeat=cf.k - 1):
            k0 = regions.compute_k0(cf, n)
            if not any(n) or not (k0 == 0 or abs(k0) >= q):
                continue
            tested += 1
            if not regions.escapes(pq, n):
                failed.append((pq, n))
    out.append(Check("P4", "escape of completions for k0 = 0 or |k0| >= q", not failed,
                     {"tested": tested, "failed": failed}, time.perf_counter() - t))
    t = time.perf_counter()
    rep = fourier.poisson_desk_check((5, 2), 31 if quick else 51)
    out.append(Check("P5", "Poisson desk check", rep.within_tail,
                     {"r": rep.r, "rel_discrepancy": rep.discrepancy,
                      "abs_discrepancy": abs(rep.lattice_sum - rep.fourier_sum),
                      "shell_mass": rep.shell_mass}, time.perf_counter() - t))
    return out


CRITERIA = (cross_formula, arithmetic_identities, dilogarithm_battery, geometry_solver,
            volume_conjecture, saddle_ratio, fourier_pipeline, appendix_numerics,
            figure8_constants, tv_trend)


def run_criterion(n: int, quick=False, table=None) -> Check:
    fn = CRITERIA[n - 1]
    t = time.perf_counter()
    chk = fn(quick, table) if fn in (volume_conjecture, saddle_ratio, tv_trend) else fn(quick)
    chk.seconds = time.perf_counter() - t
    return chk


def run_all(quick=False, extra=True) -> list[Check]:
    table = _table(quick)
    checks = [run_criterion(n, quick, table) for n in range(1, 11)]
    if extra:
        checks.extend(supplementary(quick))
    return checks
