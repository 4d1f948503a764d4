from lieheat.equiv.maps import (
    ABSTRACT,
    CONCRETE,
    EquivalenceMap,
    abstract_map,
    basis_form_preserved,
    check_reduced_class,
    compose,
    concrete_map,
    group_violations,
    identity_map,
    inverse,
    parse_components,
    parse_map,
    pushforward_field,
    substitute_components,
)
from lieheat.equiv.pde import (
    ClassForm,
    ClassPreservation,
    DependentSubstitution,
    EquivalenceGenerator,
    dependent_substitution,
    equivalence_operator,
    parse_substitution,
    rename_family,
    substitute_dependent,
    transform_pde,
    verify_class_preservation,
)

__all__ = [
    "ABSTRACT",
    "CONCRETE",
    "EquivalenceMap",
    "abstract_map",
    "basis_form_preserved",
    "check_reduced_class",
    "compose",
    "concrete_map",
    "group_violations",
    "identity_map",
    "inverse",
    "parse_components",
    "parse_map",
    "pushforward_field",
    "substitute_components",
    "ClassForm",
    "ClassPreservation",
    "DependentSubstitution",
    "EquivalenceGenerator",
    "dependent_substitution",
    "equivalence_operator",
    "parse_substitution",
    "rename_family",
    "substitute_dependent",
    "transform_pde",
    "verify_class_preservation",
]
