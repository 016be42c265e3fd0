"""Numerical Fourier coefficients of the lattice function.

All two-dimensional integrals are taken over the real regions D, D', D''
(shrunk by delta/2) with tensor Gauss-Legendre rules in u = y + x and
v = y - x.  In these coordinates the two quantum dilogarithms depend on u
and v separately, so each grid needs only O(n) evaluations of phi_r.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..arith import SurgerySlope, dual_pair, expand_negative_cf
from ..rt_exact import build_root_data, kappa_r
from ..specfun import PI, VOL_41, gauss_legendre, phi_r
from .regions import (DEFAULT_DELTA, FourierIndex, Region, all_regions,
                      completion_constant, reduced_sign, x1_closed)


class QuadratureError(RuntimeError):
    pass


def _slope(slope) -> SurgerySlope:
    return slope if isinstance(slope, SurgerySlope) else SurgerySlope(*slope)


@dataclass(frozen=True)
class RegionGrid:
    region: Region
    x: np.ndarray  # (n, n)
    y: np.ndarray
    w: np.ndarray  # weights including the Jacobian 1/2
    phi_u: np.ndarray  # phi_r(z1) as a column, depends on u only
    phi_v: np.ndarray  # phi_r(z2) as a row, depends on v only


@lru_cache(maxsize=32)
def region_grid(r: int, n: int, margin: float, kind: str) -> RegionGrid:
    reg = Region(kind, margin)
    t, wt = gauss_legendre(n)
    (u0, u1), (v0, v1) = reg.u_range, reg.v_range
    u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * t
    v = 0.5 * (v0 + v1) + 0.5 * (v1 - v0) * t
    wu = 0.5 * (u1 - u0) * wt
    wv = 0.5 * (v1 - v0) * wt
    U, Vv = u[:, None], v[None, :]
    x, y = 0.5 * (U - Vv), 0.5 * (U + Vv)
    z1, _ = reg.phi_arguments(r, 0.5 * (u - v[0]), 0.5 * (u + v[0]))
    _, z2 = reg.phi_arguments(r, 0.5 * (u[0] - v), 0.5 * (u[0] + v))
    return RegionGrid(reg, x, y, 0.5 * wu[:, None] * wv[None, :],
                      phi_r(r, z1)[:, None], phi_r(r, z2)[None, :])


def _reduced_phase(slope, grid: RegionGrid, sign: int, index: FourierIndex | None):
    s = _slope(slope)
    pp = dual_pair(s).p_prime
    x, y = grid.x, grid.y
    v = ((-s.p * x * x + sign * 2 * PI * x) / s.q - 2 * PI * x + 4 * x * y
         - grid.phi_u + grid.phi_v - pp * PI**2 / s.q)
    if index is not None:
        v = v - 4 * index.k0 * PI * x / s.q - 4 * PI * index.k1 * x - 4 * PI * index.k2 * y
    return v


def region_integral(slope, r, n, margin, weight, sign, index=None, const=0.0,
                    kinds=("D", "D'", "D''")) -> complex:
    """sum over regions of int weight(x, y, region) exp(r/(4 pi i) (V + const))."""
    total = 0j
    for kind in kinds:
        g = region_grid(r, n, margin, kind)
        v = _reduced_phase(slope, g, sign, index) + const
        wgt = 1.0 if weight is None else weight(g.x, g.y, g.region)
        vals = wgt * np.exp(v * (r / (4j * PI))) * g.w
        total += complex(math.fsum(vals.real.ravel()), math.fsum(vals.imag.ravel()))
    return total


def default_nodes(r: int) -> int:
    return max(96, 2 * r)


# ---------------------------------------------------------------------------
# leading coefficients


def leading_prefactor(slope, r) -> complex:
    """exp(i pi (k-1)/4) r^{(k+3)/2} / (4 pi^2 sqrt q) from the chain Gaussians."""
    s = _slope(slope)
    k = expand_negative_cf(s).k
    return complex(np.exp(1j * PI * (k - 1) / 4) * r ** ((k + 3) / 2) / (4 * PI**2 * math.sqrt(s.q)))


@dataclass(frozen=True)
class LeadingCoefficients:
    f0: complex
    f1: complex
    kappa: complex
    nodes: int
    change: float
    delta: float

    @property
    def approx_invariant(self) -> complex:
        return self.kappa * (self.f0 + self.f1)


def fourier_leading(slope, r, nodes: int | None = None, tol: float = 1e-8,
                    nmax: int = 2048, delta: float = DEFAULT_DELTA) -> LeadingCoefficients:
    """hat f_r(0,..,0) and hat f_r(-1,0,..,0) from the reduced 2D integrals."""
    s = _slope(slope)
    cf = expand_negative_cf(s)
    margin = delta / 2
    pref = leading_prefactor(s, r)

    def weight(variant):
        def w(x, y, reg):
            return reg.epsilon * np.sin(x1_closed(s, x, variant)) * np.exp(-1j * x)
        return w

    def both(n):
        i0 = region_integral(s, r, n, margin, weight(0), reduced_sign(cf, 0))
        i1 = region_integral(s, r, n, margin, weight(1), reduced_sign(cf, 1))
        return np.array([i0, i1])

    if nodes is None:
        n0 = default_nodes(r)
        vals, n, change = _converged_pair(both, n0, tol, nmax)
    else:
        vals, n, change = both(nodes), nodes, float("nan")
    f0 = pref * vals[0]
    f1 = -pref * vals[1]
    return LeadingCoefficients(complex(f0), complex(f1), kappa_r(cf, build_root_data(r)),
                               n, change, delta)


def _converged_pair(fn, n0, tol, nmax):
    n = n0
    prev = fn(n)
    while True:
        n2 = int(round(1.5 * n))
        if n2 > nmax:
            raise QuadratureError(f"no convergence to {tol:g} with {nmax} nodes")
        cur = fn(n2)
        change = float(np.max(np.abs(cur - prev)) / max(np.max(np.abs(cur)), 1e-300))
        if change < tol:
            return cur, n2, change
        prev, n = cur, n2


# ---------------------------------------------------------------------------
# nonleading coefficients


def fhat_reduced(slope, r, index: FourierIndex, variant: int, nodes: int,
                 delta: float = DEFAULT_DELTA, with_constant: bool = False) -> complex:
    """hat F_r(k0, k1, k2) for the variant-0 or variant-1 reduction.

    The real constant C only changes the phase; it is included on request.
    """
    s = _slope(slope)
    cf = expand_negative_cf(s)
    const = completion_constant(s, index, variant) if with_constant else 0.0
    return region_integral(s, r, nodes, delta / 2, None, reduced_sign(cf, variant),
                           index, const)


@dataclass(frozen=True)
class TailReport:
    index: tuple[int, ...]  # (n_1..n_{k-1}, k1, k2)
    k0: int
    k0_shifted: int  # k0 of the variant-1 form (n_1 + 1, n_2, ...)
    magnitude0: float
    magnitude1: float
    exponent: float  # (4 pi / r) log of the smaller magnitude
    leading: bool
    escape0: bool | None  # completion escape condition for the variant-0 form
    escape1: bool | None


def _window(k, width=1):
    rng = range(-width, width + 1)
    return itertools.product(*([rng] * (k + 1)))


def is_leading(full) -> bool:
    full = tuple(full)
    zero = (0,) * len(full)
    return full == zero or full == (-1,) + zero[1:]


def fourier_tail_decay(slope, r, indices=None, width: int = 1, nodes: int | None = None,
                       delta: float = DEFAULT_DELTA) -> list[TailReport]:
    """Magnitudes and growth exponents of hat F over an index window.

    Each index (n_1..n_{k-1}, k1, k2) is bounded through two reductions:
    variant 0 with k0(n) and variant 1 with k0(n_1 + 1, n_2, ...); the
    exponent uses the smaller magnitude.
    """
    from .regions import escapes

    s = _slope(slope)
    cf = expand_negative_cf(s)
    k = cf.k
    nodes = nodes or default_nodes(r)
    if indices is None:
        indices = list(_window(k, width))
    out = []
    for full in indices:
        full = tuple(int(v) for v in full)
        n, k1, k2 = full[:k - 1], full[k - 1], full[k]
        if k == 1:
            # no chain variables: the x-index itself carries the shift
            idx0 = FourierIndex((), k1, k2, 0)
            idx1 = FourierIndex((), k1 + 1, k2, 0)
        else:
            idx0 = FourierIndex.build(cf, n, k1, k2)
            idx1 = FourierIndex.build(cf, (n[0] + 1,) + n[1:], k1, k2)
        m0 = abs(fhat_reduced(s, r, idx0, 0, nodes, delta))
        m1 = abs(fhat_reduced(s, r, idx1, 1, nodes, delta))
        mag = min(m0, m1)
        esc0 = esc1 = None
        if k > 1 and any(idx0.n) and (idx0.k0 == 0 or abs(idx0.k0) >= s.q):
            esc0 = escapes(s, idx0.n, variant=0)
        if k > 1 and any(idx1.n) and (idx1.k0 == 0 or abs(idx1.k0) >= s.q):
            esc1 = escapes(s, idx1.n, variant=1)
        out.append(TailReport(full, idx0.k0, idx1.k0, m0, m1,
                              4 * PI / r * math.log(mag) if mag > 0 else -math.inf,
                              is_leading(full), esc0, esc1))
    return out


def growth_exponent_fit(r_values, magnitudes) -> tuple[float, float, float]:
    """Fit log|F| = a r/(4 pi) + b log r + c; returns (a, b, c)."""
    r = np.asarray(r_values, dtype=float)
    A = np.column_stack([r / (4 * PI), np.log(r), np.ones_like(r)])
    coef, *_ = np.linalg.lstsq(A, np.log(np.asarray(magnitudes, dtype=float)), rcond=None)
    return tuple(float(c) for c in coef)


# ---------------------------------------------------------------------------
# Poisson summation desk check


def smoothstep5(t):
    """C^2 ramp: 0 for t <= 0, 1 for t >= 1, 6t^5 - 15t^4 + 10t^3 between."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (t * (6 * t - 15) + 10)


def _ramp(z, lo_out, lo_in, hi_in, hi_out):
    """1 on [lo_in, hi_in], 0 outside (lo_out, hi_out), smooth in between."""
    up = smoothstep5((z - lo_out) / (lo_in - lo_out))
    down = smoothstep5((hi_out - z) / (hi_out - hi_in))
    return up * down


def bump(r, xs, y, delta: float = DEFAULT_DELTA):
    """Product bump psi_r: chain variables and the (u, v) squares of the regions."""
    val = 1.0
    for xi in xs[:-1]:
        val = val * _ramp(np.asarray(xi), -PI, -PI + 2 * PI / r, PI - 2 * PI / r, PI)
    x = xs[-1]
    u, v = y + x, y - x
    m = delta / 2
    tot = 0.0
    for reg in all_regions(0.0):
        (u0, u1), (v0, v1) = reg.u_range, reg.v_range
        tot = tot + (_ramp(u, u0, u0 + m, u1 - m, u1) * _ramp(v, v0, v0 + m, v1 - m, v1))
    return val * tot


@dataclass(frozen=True)
class PoissonReport:
    r: int
    lattice_sum: complex  # kappa_r * sum psi_r g_r over the half-integer lattice
    fourier_sum: complex  # kappa_r * sum of hat f over the window
    coefficients: dict = field(repr=False)
    discrepancy: float  # |lattice - fourier| / |lattice|
    tail_bound: float  # |kappa_r| e^{(r/4 pi)(Vol(4_1)/2 + eps)}, the single-point tail bound
    shell_mass: float  # sum of |kappa_r g_r| over the boundary layer of the bump support
    invariant: complex

    @property
    def within_tail(self) -> bool:
        return abs(self.lattice_sum - self.fourier_sum) <= self.shell_mass


def shell_mass(slope, r, cf=None) -> float:
    """sum of |kappa_r g_r| over lattice points one step from the edges of D, D', D''.

    The windowed Fourier series misses the high frequencies created where the
    bump drops to zero; this boundary-layer mass bounds their size.
    """
    s = _slope(slope)
    cf = cf or expand_negative_cf(s)
    rd = build_root_data(r)
    odd = np.arange(-(r - 2), r - 1, 2)
    Mk, Mp = odd[:, None], odd[None, :]
    valid = Mp >= np.abs(Mk)
    Mp_ = np.where(valid, Mp, np.abs(Mk))
    mag = np.abs(rd.qfact[r - 1 - (Mp_ + Mk) // 2]) / np.abs(rd.qfact[(Mp_ - Mk) // 2])
    step = 2 * PI / r
    u, v = PI * (Mp + Mk) / r, PI * (Mp - Mk) / r
    shell = np.zeros(mag.shape, dtype=bool)
    for reg in all_regions(0.0):
        (u0, u1), (v0, v1) = reg.u_range, reg.v_range
        inside = (u0 < u) & (u < u1) & (v0 < v) & (v < v1)
        near = ((u - u0 < step) | (u1 - u < step) | (v - v0 < step) | (v1 - v < step))
        shell |= inside & near
    sel = valid & shell
    if cf.k == 1:
        total = float(np.sum((mag * np.abs(np.sin(PI * Mk / r)))[sel]))
    else:
        chain = np.sum(np.abs(np.sin(PI * odd / r))) * len(odd) ** (cf.k - 2)
        total = float(np.sum(mag[sel])) * chain
    return abs(kappa_r(cf, rd)) * total


def _chain_nodes(r, nmid: int):
    """Gauss-Legendre nodes on (-pi, pi) split at the bump's plateau edges."""
    edges = [-PI, -PI + 2 * PI / r, PI - 2 * PI / r, PI]
    pts, wts = [], []
    for lo, hi in zip(edges, edges[1:]):
        npan = nmid if hi - lo > 1 else 16
        tt, ww = gauss_legendre(npan)
        pts.append(0.5 * (lo + hi) + 0.5 * (hi - lo) * tt)
        wts.append(0.5 * (hi - lo) * ww)
    return np.concatenate(pts), np.concatenate(wts)


def _chain_transfer(cf, r, t, w, n):
    """Values at the chain nodes of the integral over x_1..x_{k-2} feeding x_{k-1}.

    Returns G(t) such that the full chain integral against the coupling
    exp(lam(-2 x_{k-1} x)) is sum_j w_j G(t_j) exp(-2 lam t_j x).
    """
    lam = r / (4j * PI)
    psi = _ramp(t, -PI, -PI + 2 * PI / r, PI - 2 * PI / r, PI)
    g = psi * np.sin(t) * np.exp(lam * (-cf.a[0] * t * t - 2 * PI * t - 4 * PI * n[0] * t))
    for i in range(1, cf.k - 1):
        coup = np.exp(lam * (-2.0) * np.outer(t, t))  # (x_{i}, x_{i+1})
        g = (w * g) @ coup
        g = g * psi * np.exp(lam * (-cf.a[i] * t * t - 4 * PI * n[i] * t))
    return g


def fourier_coefficients_full(slope, r, indices, delta: float = DEFAULT_DELTA,
                              nchain: int | None = None, nuv: int | None = None,
                              chunk: int = 20000) -> dict:
    """hat f_r(n_1..n_k, n) as (k+1)-dimensional integrals with the bump psi_r.

    The chain variables x_1..x_{k-1} are integrated with a transfer chain
    on Gauss-Legendre nodes; (x, y) = (x_k, y) use the region grids extended
    to the bump support.  ``indices`` are tuples (n_1..n_{k-1}, k1, k2).
    """
    s = _slope(slope)
    cf = expand_negative_cf(s)
    k = cf.k
    lam = r / (4j * PI)
    nchain = nchain or max(128, 12 * r)
    nuv = nuv or max(128, 2 * r + 32)
    t, w = _chain_nodes(r, nchain)
    indices = [tuple(int(v) for v in idx) for idx in indices]
    chain_keys = sorted({idx[:k - 1] for idx in indices})
    chain = {key: _chain_transfer(cf, r, t, w, key) for key in chain_keys} if k > 1 else {}
    sums = {idx: 0j for idx in indices}
    for kind in ("D", "D'", "D''"):
        g = region_grid(r, nuv, 0.0, kind)
        x, y = g.x.ravel(), g.y.ravel()
        u, v = y + x, y - x
        (u0, u1), (v0, v1) = g.region.u_range, g.region.v_range
        m = delta / 2
        psi_d = _ramp(u, u0, u0 + m, u1 - m, u1) * _ramp(v, v0, v0 + m, v1 - m, v1)
        phi_part = (-g.phi_u + g.phi_v).ravel()
        ql = -cf.a[-1] * x * x - 2 * PI * x + 4 * x * y - (2 * PI * x if k == 1 else 0)
        base = psi_d * g.region.epsilon * np.exp(lam * (ql + phi_part) - 1j * x) * g.w.ravel()
        if k == 1:
            base = base * np.sin(x)
        for key in (chain_keys if k > 1 else [()]):
            if k > 1:
                h = np.empty(x.shape, dtype=complex)
                gw = w * chain[key]
                for lo in range(0, x.size, chunk):
                    xx = x[lo:lo + chunk]
                    h[lo:lo + chunk] = np.exp(-2 * lam * np.outer(xx, t)) @ gw
                vals = base * h
            else:
                vals = base
            for idx in indices:
                if idx[:k - 1] != key:
                    continue
                k1, k2 = idx[k - 1], idx[k]
                term = vals * np.exp(lam * (-4 * PI * k1 * x - 4 * PI * k2 * y))
                sums[idx] += complex(math.fsum(term.real), math.fsum(term.imag))
    out = {}
    for idx in indices:
        sign = (-1) ** sum(idx)
        out[idx] = sign * (r / (2 * PI)) ** (k + 1) * sums[idx]
    return out


def poisson_desk_check(slope, r, width: int = 1, delta: float = DEFAULT_DELTA,
                       nchain: int | None = None, nuv: int | None = None) -> PoissonReport:
    """Compare the bump-weighted lattice sum with its windowed Fourier series."""
    from ..rt_exact import lattice_sum, rt_symmetrized

    s = _slope(slope)
    cf = expand_negative_cf(s)
    rd = build_root_data(r)
    lat = lattice_sum(s, rd, cf, weight=lambda xs, y: bump(r, xs, y, delta))
    coeffs = fourier_coefficients_full(s, r, list(_window(cf.k, width)), delta, nchain, nuv)
    kap = kappa_r(cf, rd)
    four = kap * sum(coeffs.values())
    inv = rt_symmetrized(s, rd, cf).value
    tail = abs(kap) * math.exp(r / (4 * PI) * (VOL_41 / 2 + 0.05))
    return PoissonReport(r, complex(lat), complex(four), coeffs,
                         abs(lat - four) / abs(lat), tail, shell_mass(s, r, cf), inv)
