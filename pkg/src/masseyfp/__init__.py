"""Cohomology of finite groups over F_p, Massey products and unipotent embedding problems."""

__version__ = "0.1.0"

from .errors import (BudgetExceeded, DimensionMismatch, HomomorphismError, InvalidDefiningSystem,  # noqa: E402
                     MasseyFpError, NonAbelianKernelError, NotACocycleError, NotAGroupError,
                     PreconditionError, SingularMatrixError, UnsupportedCoefficients)
from .groups import FiniteGroup, GroupHom, Subgroup  # noqa: E402
from .cohomology import Cochain, CohomClass, GModule  # noqa: E402
from .massey import DefiningSystem, MasseyValueCoset, MasseyVerdict  # noqa: E402

__all__ = [
    "BudgetExceeded", "Cochain", "CohomClass", "DefiningSystem", "DimensionMismatch", "FiniteGroup",
    "GModule", "GroupHom", "HomomorphismError", "InvalidDefiningSystem", "MasseyFpError",
    "MasseyValueCoset", "MasseyVerdict", "NonAbelianKernelError", "NotACocycleError", "NotAGroupError",
    "PreconditionError", "SingularMatrixError", "Subgroup", "UnsupportedCoefficients", "__version__",
]
