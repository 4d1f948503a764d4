from lieheat.expr.atoms import AtomApplication, atom_applications, atom_function
from lieheat.expr.symbols import (
    EMPTY_CHART,
    AtomSpec,
    Chart,
    Jet,
    ParamSpec,
    RewriteRule,
    SymbolTable,
    declared_name,
    default_table,
    jet_name,
    localize,
)
from lieheat.expr.kernel import (
    apply_rules,
    diff,
    normalize,
    prepare,
    substitute,
    total_diff,
)
from lieheat.expr.zero_test import (
    DEFAULT_OPTIONS,
    ZeroTestOptions,
    ZeroVerdict,
    is_zero,
)

__all__ = [
    "AtomApplication",
    "atom_applications",
    "atom_function",
    "EMPTY_CHART",
    "AtomSpec",
    "Chart",
    "Jet",
    "ParamSpec",
    "RewriteRule",
    "SymbolTable",
    "declared_name",
    "default_table",
    "jet_name",
    "localize",
    "apply_rules",
    "diff",
    "normalize",
    "prepare",
    "substitute",
    "total_diff",
    "DEFAULT_OPTIONS",
    "ZeroTestOptions",
    "ZeroVerdict",
    "is_zero",
]
