"""Extended Laplace-method asymptotics with Faxen-integral transition terms."""

__version__ = "0.1.0"

from .coeffs import (
    BranchContext,
    CoefficientTable,
    ExpansionSpec,
    InsufficientCoefficientsError,
    compute_a,
    compute_b,
    compute_c,
    compute_f,
    select_branch,
)
from .expansion import ExpansionEvaluation, evaluate, evaluate_corollary2
from .faxen import FaxenQuery, FaxenResult, fi, fi_derivative, parabolic_cylinder_u, scorer_hi
from .quadrature import Contour, QuadratureResult, integrate_contour, tail_bound_check
from .series import GeneralizedSeries
from .applications import (
    AngerWeberSpec,
    ConfluentSpec,
    anger_weber_eval,
    confluent_eval,
)
from .estimator import LaplaceExpansion
from .validation import SpecValidationError, load_spec, spec_from_json, spec_to_json

__all__ = [
    "BranchContext", "CoefficientTable", "ExpansionSpec", "InsufficientCoefficientsError",
    "compute_a", "compute_b", "compute_c", "compute_f", "select_branch",
    "ExpansionEvaluation", "evaluate", "evaluate_corollary2",
    "FaxenQuery", "FaxenResult", "fi", "fi_derivative", "parabolic_cylinder_u", "scorer_hi",
    "Contour", "QuadratureResult", "integrate_contour", "tail_bound_check",
    "GeneralizedSeries",
    "AngerWeberSpec", "ConfluentSpec", "anger_weber_eval", "confluent_eval",
    "LaplaceExpansion",
    "SpecValidationError", "load_spec", "spec_from_json", "spec_to_json",
]
