from lieheat.parser.grammar import ParseTree, SourceSpan, parse_tree
from lieheat.parser.lowering import (
    DEFAULT_MAX_EXPONENT,
    lower_text,
    parse_chart,
    parse_charts,
    parse_expr,
    parse_field,
    parse_rule,
    split_top_level,
)
from lieheat.parser.printer import LieHeatPrinter, print_expr, print_field

__all__ = [
    "ParseTree",
    "SourceSpan",
    "parse_tree",
    "DEFAULT_MAX_EXPONENT",
    "lower_text",
    "parse_chart",
    "parse_charts",
    "parse_expr",
    "parse_field",
    "parse_rule",
    "split_top_level",
    "LieHeatPrinter",
    "print_expr",
    "print_field",
]
