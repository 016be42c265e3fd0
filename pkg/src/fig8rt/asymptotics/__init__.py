"""Volume-conjecture asymptotics: Fourier coefficients, saddle points, convergence."""

from .fourier import (LeadingCoefficients, PoissonReport, TailReport, fourier_coefficients_full,
                      fourier_leading, fourier_tail_decay, poisson_desk_check)
from .quadratic_phase import gaussian_phase_integral, verify_saddle_2d
from .regions import (DEFAULT_DELTA, FourierIndex, Region, completion, interior_lemma_scan,
                      solve_delta, v_r_potential)
from .saddle import (ConvergenceRecord, SaddlePrediction, convergence_table, fit_residuals,
                     saddle_prediction)

__all__ = [
    "ConvergenceRecord", "DEFAULT_DELTA", "FourierIndex", "LeadingCoefficients", "PoissonReport",
    "Region", "SaddlePrediction", "TailReport", "completion", "convergence_table", "fit_residuals",
    "fourier_coefficients_full", "fourier_leading", "fourier_tail_decay", "gaussian_phase_integral",
    "interior_lemma_scan", "poisson_desk_check", "saddle_prediction", "solve_delta",
    "v_r_potential", "verify_saddle_2d",
]
