"""singtool: singular integral transforms on periodic grids.

Riesz/Hilbert/Beurling transforms as Fourier multipliers, truncated and
maximal variants by direct quadrature, auxiliary sphere potentials, weak-Lp
quasinorms, and the dipole experiment exhibiting log growth of the maximal
transform's weak-L1 quasinorm against a bounded L1 budget.
"""

__version__ = "0.1.0"

from .grid import Field, GridSpec, integral, make_grid, sample, sample_averaged
from .norms import (DistributionRecord, default_lambda_grid, distribution,
                    lp_norm, weak_quasinorm)
from .spectral import (CalibrationError, MultiplierSpec, beurling,
                       beurling_inverse, calibrate_riesz_constant,
                       dipole_preimage, hilbert, riesz)
from .quadrature import (KernelSpec, TruncationLadder, cauchy_transform,
                         disc_average, hl_maximal, hl_maximal_grid,
                         maximal_transform, maximal_transform_grid,
                         truncated_transform, truncated_grid)
from .potentials import (SpherePotentialSpec, decay_product,
                         exterior_kernel_field, fit_c0_and_bound_b, h_field,
                         p_eval)
from .counterexample import (DipoleSource, SweepRecord, build_f_eps,
                             fit_log_growth, run_sweep)

__all__ = [
    "Field", "GridSpec", "integral", "make_grid", "sample", "sample_averaged",
    "DistributionRecord", "default_lambda_grid", "distribution", "lp_norm",
    "weak_quasinorm",
    "CalibrationError", "MultiplierSpec", "beurling", "beurling_inverse",
    "calibrate_riesz_constant", "dipole_preimage", "hilbert", "riesz",
    "KernelSpec", "TruncationLadder", "cauchy_transform", "disc_average",
    "hl_maximal", "hl_maximal_grid", "maximal_transform",
    "maximal_transform_grid", "truncated_transform", "truncated_grid",
    "SpherePotentialSpec", "decay_product", "exterior_kernel_field",
    "fit_c0_and_bound_b", "h_field", "p_eval",
    "DipoleSource", "SweepRecord", "build_f_eps", "fit_log_growth", "run_sweep",
]
