"""Softened isogeometric discretization of the Laplace eigenproblem on
the unit cube: B-spline spaces with and without outlier modes, jump
penalization of the highest derivative, closed-form reference spectra,
and spectral comparison utilities."""

from .analytic import (DispersionExpansion, EtaTable, analytic_eigenvalue,
                       analytic_eigenvector_sample, commutator_norm,
                       dispersion_eigenvalue, dispersion_expansion,
                       eta_table, fit_leading_coefficient,
                       inverse_constants, inverse_constants_squared,
                       interior_stencil, reference_matrix,
                       softened_reference)
from .assembly import (IndefinitenessWarning, SoftSystem, SymBandedMatrix,
                       assemble_mass, assemble_softness,
                       assemble_stiffness, build_soft_system)
from .eigensolve import (DefinitenessError, EigenSolveError, Spectrum,
                         generalized_eig)
from .spaces import SplineSpace, build_of_space, build_standard_space
from .splines import (BasisEval, KnotVector, eval_basis, open_knot_vector,
                      pth_derivative_jump)
from .spectral_analysis import (ConditionStats, InsufficientDataError,
                                SpectralReport, condition_stats,
                                convergence_slope, eigenvalue_convergence,
                                eta_sweep, h1_convergence,
                                h1_eigenfunction_error,
                                h1_errors_for_modes, pythagorean_check,
                                relative_errors, solve_system,
                                spectrum_for)
from .tensor import (TensorSpectrum, exact_eigenvalue, exact_spectrum,
                     kron_pencil, kron_sum_spectrum)

__version__ = "0.1.0"

__all__ = [
    "BasisEval", "ConditionStats", "DefinitenessError",
    "DispersionExpansion", "EigenSolveError", "EtaTable",
    "IndefinitenessWarning", "InsufficientDataError", "KnotVector",
    "SoftSystem", "SpectralReport", "Spectrum", "SplineSpace",
    "SymBandedMatrix", "TensorSpectrum", "analytic_eigenvalue",
    "analytic_eigenvector_sample", "assemble_mass", "assemble_softness",
    "assemble_stiffness", "build_of_space", "build_soft_system",
    "build_standard_space", "commutator_norm", "condition_stats",
    "convergence_slope", "dispersion_eigenvalue", "dispersion_expansion",
    "eigenvalue_convergence", "eta_sweep", "eta_table", "eval_basis",
    "exact_eigenvalue", "exact_spectrum", "fit_leading_coefficient",
    "generalized_eig", "h1_convergence", "h1_eigenfunction_error",
    "h1_errors_for_modes", "interior_stencil", "inverse_constants",
    "inverse_constants_squared", "kron_pencil", "kron_sum_spectrum",
    "open_knot_vector", "pth_derivative_jump", "pythagorean_check",
    "reference_matrix", "relative_errors", "softened_reference",
    "solve_system", "spectrum_for",
]
