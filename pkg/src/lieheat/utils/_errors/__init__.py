from lieheat.utils._errors._exceptions import (
    LieHeatError,
    DeclarationError,
    ProlongationOrderError,
    ChartError,
    KernelInconsistency,
    ParseError,
    PointFieldViolation,
    ClassViolation,
    SplitError,
    NotClosedError,
    ParameterError,
    DimensionError,
    MapError,
    CatalogError,
)

__all__ = [
    "LieHeatError",
    "DeclarationError",
    "ProlongationOrderError",
    "ChartError",
    "KernelInconsistency",
    "ParseError",
    "PointFieldViolation",
    "ClassViolation",
    "SplitError",
    "NotClosedError",
    "ParameterError",
    "DimensionError",
    "MapError",
    "CatalogError",
]
