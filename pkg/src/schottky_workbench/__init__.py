"""Workbench for Siegel theta series of even unimodular lattices, exact
Fourier-expansion arithmetic, the weight-8 Schottky form, and first-order
period-matrix degenerations."""

from .cache import ENGINE_VERSION, ENV_CACHE_PATH, CountCache, cache_from_env
from .counting import CountEngine, get_engine, representation_count
from .expansion import (DerivativePolynomial, DomainError, EvalResult,
                        FourierExpansion, IncompatibleExpansionError,
                        LimitReport, SiegelPoint, TruncationError,
                        apply_derivative, evaluate, siegel_limit_check,
                        siegel_operator, zero_expansion)
from .fay import (DegenerationData, coefficient_A, coefficient_B,
                  derivative_identity_check, fay_check,
                  period_matrix_first_order, scaling_law_check, sigma_matrix)
from .indices import (border_zero_forced, canonical_signed_perm,
                      enumerate_indices, from_upper_triangle, is_psd,
                      upper_triangle, validate_index)
from .lattices import (Lattice, LatticeError, LatticeVector,
                       UnsupportedLatticeError, build_lattice, direct_sum,
                       e8e8, enumerate_vectors, lattice_by_id,
                       short_vector_shells)
from .schottky import (first_nonzero_index, nonzero_report,
                       schottky_expansion, verify_vanishing)
from .theta import default_norm_budget, theta_eval, theta_expansion

__version__ = "0.1.0"

__all__ = [
    "CountCache", "CountEngine", "DegenerationData", "DerivativePolynomial",
    "DomainError", "ENGINE_VERSION", "ENV_CACHE_PATH", "EvalResult",
    "FourierExpansion", "IncompatibleExpansionError", "Lattice",
    "LatticeError", "LatticeVector", "LimitReport", "SiegelPoint",
    "TruncationError", "UnsupportedLatticeError", "apply_derivative",
    "border_zero_forced", "build_lattice", "cache_from_env",
    "canonical_signed_perm", "coefficient_A", "coefficient_B",
    "default_norm_budget", "derivative_identity_check", "direct_sum", "e8e8",
    "enumerate_indices", "enumerate_vectors", "evaluate", "fay_check",
    "first_nonzero_index", "from_upper_triangle", "get_engine", "is_psd",
    "lattice_by_id", "nonzero_report", "period_matrix_first_order",
    "representation_count", "scaling_law_check", "schottky_expansion",
    "short_vector_shells", "siegel_limit_check", "siegel_operator",
    "sigma_matrix", "theta_eval", "theta_expansion", "upper_triangle",
    "validate_index", "verify_vanishing", "zero_expansion",
]
