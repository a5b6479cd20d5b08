"""Classify, enumerate, construct and certify real square roots of semisimple matrices."""
from .branches import (
    BranchIndex, SqrtBranch, build_rja, count_if_finite, dimension_of, enumerate_branches,
    finite_roots, is_finite, principal_branch_index, psr_component_count, representative,
    sample_branch, verify_fixed_point,
)
from .errors import (
    AmbiguousSpectrum, CertificationFailure, CountUndefined, DefectiveInput, ExistenceViolated,
    IndexOutOfRange, NonConvergence, NotSkew, NotSpd, NotSpecialOrthogonal, ParseError,
    ResidualTooLarge, SingularInput, SqrtAtlasError,
)
from .numkit import DEFAULT_TOL, Tolerances, expm, rho, rho_inverse
from .spectral import SpectralProfile, check_semisimple, classify_spectrum, has_real_sqrt, rjs_decompose
from .report import analyze, certify, compute_root

__version__ = "0.1.0"

__all__ = [
    "AmbiguousSpectrum", "BranchIndex", "CertificationFailure", "CountUndefined", "DEFAULT_TOL",
    "DefectiveInput", "ExistenceViolated", "IndexOutOfRange", "NonConvergence", "NotSkew", "NotSpd",
    "NotSpecialOrthogonal", "ParseError", "ResidualTooLarge", "SingularInput", "SpectralProfile",
    "SqrtAtlasError", "SqrtBranch", "Tolerances", "analyze", "build_rja", "certify",
    "check_semisimple", "classify_spectrum", "compute_root", "count_if_finite", "dimension_of",
    "enumerate_branches", "expm", "finite_roots", "has_real_sqrt", "is_finite",
    "principal_branch_index", "psr_component_count", "representative", "rho", "rho_inverse",
    "rjs_decompose", "sample_branch", "verify_fixed_point",
]
