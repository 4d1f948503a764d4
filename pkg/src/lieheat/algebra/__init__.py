from lieheat.algebra.structure import (
    StructureConstants,
    direct_sum,
    jacobi_check,
    span_coefficients,
    structure_constants,
)
from lieheat.algebra.invariants import (
    KillingForm,
    center,
    derived_algebra,
    derived_series,
    is_nilpotent,
    is_solvable,
    killing_form,
    lower_central_series,
    nilradical,
    radical,
)
from lieheat.algebra.registry import AlgebraRecord, REGISTRY, canonical_name, lookup, records
from lieheat.algebra.classify import AlgebraFingerprint, Label, classify, restrict

__all__ = [
    "StructureConstants",
    "direct_sum",
    "jacobi_check",
    "span_coefficients",
    "structure_constants",
    "KillingForm",
    "center",
    "derived_algebra",
    "derived_series",
    "is_nilpotent",
    "is_solvable",
    "killing_form",
    "lower_central_series",
    "nilradical",
    "radical",
    "AlgebraRecord",
    "REGISTRY",
    "canonical_name",
    "lookup",
    "records",
    "AlgebraFingerprint",
    "Label",
    "classify",
    "restrict",
]
