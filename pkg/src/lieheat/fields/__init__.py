from lieheat.fields.vector_field import (
    ZERO_FIELD,
    VectorField,
    commutator,
    linear_combination,
)
from lieheat.fields.prolongation import (
    Prolongation2,
    Residual,
    check_class_member,
    determining_equation,
    determining_residual,
    generic_atom,
    invariance_residual,
    prolong2,
    reduced_class_field,
    split_by_jet_monomials,
)

__all__ = [
    "ZERO_FIELD",
    "VectorField",
    "commutator",
    "linear_combination",
    "Prolongation2",
    "Residual",
    "check_class_member",
    "determining_equation",
    "determining_residual",
    "generic_atom",
    "invariance_residual",
    "prolong2",
    "reduced_class_field",
    "split_by_jet_monomials",
]
