"""Exact graded commutative algebra: Betti and Bass numbers, Veronese
subrings and submodules, graded Matlis duals and Cech local cohomology."""

from .errors import Limits, ResourceLimitError, VbassError
from .exactalg import QQ, Field, GradedRing, Poly, parse_poly

__version__ = "0.1.0"

__all__ = ["QQ", "Field", "GradedRing", "Poly", "parse_poly", "Limits",
           "ResourceLimitError", "VbassError"]
