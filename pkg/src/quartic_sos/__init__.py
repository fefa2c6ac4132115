"""Exact sum-of-squares certificates for nonnegative ternary quartic forms."""

from .certify import Certificate, expand, from_json, to_json, verify
from .errors import (
    BudgetExceeded,
    DegenerateSystem,
    DegreeBudgetExceeded,
    InternalError,
    NotPSDError,
    QuarticSOSError,
    RefinementBudgetExceeded,
)
from .forms import Matrix3, Poly, UniPoly, binary, sphere, ternary
from .ladder import decompose, is_psd, min_binary_on_circle, min_on_sphere
from .realalg import RealAlgebraic
from .zerofinder import ProjectiveZero, ZeroSet, projective_real_zeros

__all__ = [
    "BudgetExceeded",
    "Certificate",
    "DegenerateSystem",
    "DegreeBudgetExceeded",
    "InternalError",
    "Matrix3",
    "NotPSDError",
    "Poly",
    "ProjectiveZero",
    "QuarticSOSError",
    "RealAlgebraic",
    "RefinementBudgetExceeded",
    "UniPoly",
    "ZeroSet",
    "binary",
    "decompose",
    "expand",
    "from_json",
    "is_psd",
    "min_binary_on_circle",
    "min_on_sphere",
    "projective_real_zeros",
    "sphere",
    "ternary",
    "to_json",
    "verify",
]
