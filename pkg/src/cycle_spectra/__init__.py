"""High-precision spectra of cycle Laplacians with one weighted edge."""

__version__ = "1.0.0"

from .errors import (  # noqa: E402
    BracketError,
    BracketViolation,
    ConvergenceError,
    CycleSpectraError,
    DomainError,
    ParseError,
    SingularShift,
    SizeError,
    VerificationError,
)
from .model import ModelConstants, SpectralProblem, constants, parse_alpha  # noqa: E402
from .numeric import DEFAULT_BITS, PrecisionContext  # noqa: E402
from .inner import EigenvalueRecord, full_spectrum, localize  # noqa: E402
from .outlier import OutlierSolution, solve_outlier  # noqa: E402
from .asymptotics import AsymptoticReport, asymptotic_report, error_table  # noqa: E402
from .eigenvectors import EigenvectorRecord, eigenvector, norm_asympt, norm_exact  # noqa: E402
from .oracle import InertiaResult, count_below, det_recurrence, oracle_spectrum  # noqa: E402

__all__ = [
    "AsymptoticReport", "BracketError", "BracketViolation", "ConvergenceError", "CycleSpectraError",
    "DEFAULT_BITS", "DomainError", "EigenvalueRecord", "EigenvectorRecord", "InertiaResult",
    "ModelConstants", "OutlierSolution", "ParseError", "PrecisionContext", "SingularShift", "SizeError",
    "SpectralProblem", "VerificationError", "asymptotic_report", "constants", "count_below",
    "det_recurrence", "eigenvector", "error_table", "full_spectrum", "localize", "norm_asympt",
    "norm_exact", "oracle_spectrum", "parse_alpha", "solve_outlier",
]
