"""Green configurations and the predimension calculus."""

from .model import (AlgebraicGreen, BaseMismatch, BoundedVerdict, ConfigError, Configuration,
                    DuplicateName, SubSelection, UnknownName, ZeroGreen)
from .engine import Engine, engine_for
from .predim import (DEFAULT_BOUND, Classification, NonTermination, ValidationReport, cl_geom_member,
                     classify_extension, delta, dim_d, hull, is_strong, md_cl_green, trd, validate)
from .search import iter_hnf, saturated_form

__all__ = [
    "AlgebraicGreen", "BaseMismatch", "BoundedVerdict", "ConfigError", "Configuration", "DuplicateName",
    "SubSelection", "UnknownName", "ZeroGreen", "Engine", "engine_for", "DEFAULT_BOUND", "Classification",
    "NonTermination", "ValidationReport", "cl_geom_member", "classify_extension", "delta", "dim_d", "hull",
    "is_strong", "md_cl_green", "trd", "validate", "iter_hnf", "saturated_form",
]
