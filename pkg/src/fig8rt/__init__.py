"""Reshetikhin-Turaev invariants of Dehn fillings of the figure-8 knot and their asymptotics."""

from .arith import SurgerySlope, dual_pair, expand_negative_cf
from .geometry import CriticalData, solve_critical
from .rt_exact import build_root_data, rt_direct, rt_symmetrized, tv_proxy

__version__ = "0.1.0"

__all__ = [
    "CriticalData", "SurgerySlope", "build_root_data", "dual_pair", "expand_negative_cf",
    "rt_direct", "rt_symmetrized", "solve_critical", "tv_proxy",
]
