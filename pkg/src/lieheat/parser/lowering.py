"""
Lowering of parse trees to kernel expressions, and the small languages built
on top of expressions: vector fields, rewrite rules, charts and declarations.
"""

import logging
from fractions import Fraction

import sympy as sp

from lieheat.expr import (
    EMPTY_CHART,
    Chart,
    RewriteRule,
    SymbolTable,
    localize,
    normalize,
)
from lieheat.expr.symbols import INPUT_ORDER
from lieheat.fields.vector_field import VectorField
from lieheat.parser.grammar import ParseTree, SourceSpan, parse_tree
from lieheat.utils import DeclarationError, ParseError, PointFieldViolation

logger = logging.getLogger(__name__)

DEFAULT_MAX_EXPONENT = 1000
FIELD_MARKERS = ("dt", "dx", "du")

_BUILTINS = {
    "ln": sp.log,
    "log": sp.log,
    "exp": sp.exp,
    "sqrt": sp.sqrt,
    "arctan": sp.atan,
    "atan": sp.atan,
    "abs": sp.Abs,
}
_CONSTANTS = {"pi": sp.pi}


class _Lowering:
    def __init__(self, text: str, table: SymbolTable, extra: dict, max_exponent: int):
        self.text = text
        self.table = table
        self.extra = extra
        self.max_exponent = max_exponent

    def fail(self, message: str, node: ParseTree):
        raise ParseError(message, node.span)

    def lower(self, node: ParseTree) -> sp.Expr:
        handler = getattr(self, f"_lower_{node.kind}")
        return handler(node)

    def _lower_number(self, node):
        return sp.Rational(Fraction(node.value))

    def _lower_name(self, node):
        name = node.value
        if name in self.extra:
            return self.extra[name]
        if name in _CONSTANTS:
            return _CONSTANTS[name]
        if name in self.table.atoms:
            self.fail(f"atom {name} needs arguments", node)
        if name in _BUILTINS:
            self.fail(f"function {name} needs an argument", node)
        try:
            symbol = self.table.lookup(name)
        except DeclarationError as e:
            raise DeclarationError(
                f"undeclared name '{name}' at line {node.span.line}, column {node.span.column}",
                name,
                e.suggestions,
            ) from None
        jet = self.table.jet_of(symbol)
        if jet is not None and jet.order > INPUT_ORDER:
            self.fail(f"jet {name} has order above {INPUT_ORDER}", node)
        return symbol

    def _lower_paren(self, node):
        return self.lower(node.children[0])

    def _lower_neg(self, node):
        return -self.lower(node.children[0])

    def _lower_binop(self, node):
        left, right = (self.lower(child) for child in node.children)
        op = node.value
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if right == 0:
                self.fail("division by zero", node.children[1])
            return left / right
        if right.is_Integer and abs(int(right)) > self.max_exponent:
            self.fail(f"exponent {right} exceeds the limit {self.max_exponent}", node.children[1])
        return left**right

    def _atom_args(self, name, node, args):
        spec = self.table.atom(name)
        if not args:
            return spec, list(spec.templates)
        if len(args) != spec.arity:
            self.fail(f"atom {name} takes {spec.arity} argument(s), got {len(args)}", node)
        return spec, args

    def _lower_call(self, node):
        name = node.value
        args = [self.lower(child) for child in node.children]
        if name in _BUILTINS:
            if len(args) != 1:
                self.fail(f"{name} takes exactly one argument", node)
            return _BUILTINS[name](args[0])
        if name not in self.table.atoms:
            try:
                self.table.atom(name)
            except DeclarationError as e:
                raise DeclarationError(
                    f"undeclared function '{name}' at line {node.span.line}, column {node.span.column}",
                    name,
                    e.suggestions,
                ) from None
        spec, args = self._atom_args(name, node, args)
        return spec(*args)

    def _lower_prime(self, node):
        name, order = node.value
        spec = self.table.atom(name) if name in self.table.atoms else None
        if spec is None or spec.templates != (self.table.independent["t"],):
            self.fail(f"prime notation needs a declared atom of t alone, got {name}", node)
        args = [self.lower(child) for child in node.children]
        spec, args = self._atom_args(name, node, args)
        return spec(*args, orders=(order,))

    def _lower_deriv(self, node):
        name, pairs, _ = node.value
        if name not in self.table.atoms:
            self.fail(f"D[...] needs a declared atom, got {name}", node)
        spec = self.table.atom(name)
        template_names = [s.name for s in spec.templates]
        orders = [0] * spec.arity
        for var, count in pairs:
            if var not in template_names:
                self.fail(f"{var} is not a template variable of {name}", node)
            orders[template_names.index(var)] += count
        args = [self.lower(child) for child in node.children]
        spec, args = self._atom_args(name, node, args)
        return spec(*args, orders=orders)


def lower_text(
    text: str,
    table: SymbolTable,
    extra: dict | None = None,
    max_exponent: int = DEFAULT_MAX_EXPONENT,
) -> sp.Expr:
    """Parse and lower ``text`` without normalizing it."""
    tree = parse_tree(text)
    value = _Lowering(text, table, extra or {}, max_exponent).lower(tree)
    if value.has(sp.zoo, sp.nan, sp.oo, -sp.oo):
        raise ParseError("expression has no finite value", tree.span)
    return value


def parse_expr(text: str, table: SymbolTable, max_exponent: int = DEFAULT_MAX_EXPONENT) -> sp.Expr:
    """
    Parse ``text`` into a normalized expression.

    Parameters
    ----------
    text : str
        Expression such as ``"u_x^2*G(x*u_x)"``.
    table : SymbolTable
        Declared names.
    max_exponent : int, optional
        Largest admissible absolute integer exponent.

    Returns
    -------
    sympy.Expr
        Normalized expression. Absolute values whose sign is not known stay.

    Raises
    ------
    ParseError
        On malformed text, with the span of the problem.
    DeclarationError
        On an undeclared name, with close declared names as suggestions.
    """
    value = lower_text(text, table, max_exponent=max_exponent)
    return normalize(localize(value, table, EMPTY_CHART, strict=False), table)


def parse_field(text: str, table: SymbolTable, max_exponent: int = DEFAULT_MAX_EXPONENT) -> VectorField:
    """
    Parse ``"<tau>*dt + <xi>*dx + <eta>*du"`` into a `VectorField`.

    Missing components are zero and terms may come in any order.

    Raises
    ------
    ParseError
        If a term is not linear in exactly one of ``dt``, ``dx``, ``du``.
    PointFieldViolation
        If a coefficient depends on a derivative of u.
    """
    markers = {name: sp.Symbol(f"__{name}") for name in FIELD_MARKERS}
    value = sp.expand(lower_text(text, table, markers, max_exponent))
    span = SourceSpan.of(text, 0, len(text))
    coefficients = []
    if value == 0:
        coefficients = [sp.Integer(0)] * 3
    else:
        try:
            poly = sp.Poly(value, *markers.values())
        except sp.PolynomialError:
            raise ParseError("field terms must be linear in dt, dx and du", span) from None
        if any(sum(monomial) != 1 for monomial in poly.monoms()):
            raise ParseError("every field term needs exactly one of dt, dx, du", span)
        for index in range(3):
            monomial = tuple(int(i == index) for i in range(3))
            coefficients.append(poly.coeff_monomial(monomial))
    coefficients = [normalize(localize(c, table), table) for c in coefficients]
    for coefficient in coefficients:
        jets = [s for s in coefficient.free_symbols if (j := table.jet_of(s)) and j.order > 0]
        if jets:
            raise PointFieldViolation(
                f"point-field violation: coefficient {coefficient} depends on {sorted(map(str, jets))[0]}"
            )
    return VectorField(*coefficients)


def parse_rule(text: str, table: SymbolTable, provenance: str = "") -> RewriteRule:
    """Parse ``"alpha''(t) -> -2*alpha'(t)^2/alpha(t)^2"`` into a `RewriteRule`."""
    lhs, arrow, rhs = text.partition("->")
    if not arrow:
        raise ParseError("rule needs '->'", SourceSpan.of(text, len(text)))
    try:
        return RewriteRule.from_lhs(
            lower_text(lhs, table), lower_text(rhs, table), provenance or text.strip()
        )
    except ParseError as e:
        raise ParseError(f"in rule '{text.strip()}': {e.message}") from None


def split_top_level(text: str, separator: str) -> list:
    """Split ``text`` at ``separator`` outside parentheses and brackets."""
    parts, depth, current = [], 0, []
    for char in text:
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        if char == separator and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    parts.append("".join(current))
    return parts


def parse_chart(text: str, table: SymbolTable) -> Chart:
    """
    Parse a chart such as ``"t > 0, u_x > 0, eps = 1"``.

    A condition on a declared name fixes its sign, a condition on a compound
    expression is used to resolve ``abs`` of that expression, and ``name =
    value`` binds a sign symbol or parameter. ``eps > 0`` for a sign symbol
    is the binding ``eps = 1``.
    """
    signs, conditions, bindings = [], [], []
    for raw in split_top_level(text, ","):
        condition = raw.strip()
        if not condition:
            continue
        for op in (">", "<", "="):
            if op in condition:
                left, _, right = condition.partition(op)
                break
        else:
            raise ParseError(f"chart condition needs >, < or =: '{condition}'")
        left = left.strip()
        if op == "=":
            bindings.append((left, lower_text(right, table)))
            table.lookup(left)
            continue
        if lower_text(right, table) != 0:
            raise ParseError(f"chart conditions compare with 0: '{condition}'")
        sign = 1 if op == ">" else -1
        if left.isidentifier():
            symbol = table.lookup(left)
            if symbol in table.sign_symbols:
                bindings.append((left, sp.Integer(sign)))
            else:
                signs.append((left, sign))
        else:
            conditions.append((lower_text(left, table), sign))
    return Chart(tuple(signs), tuple(conditions), tuple(bindings), text.strip())


def parse_charts(text: str, table: SymbolTable) -> list:
    """Parse ``"t > 0 | t < 0"`` into one `Chart` per alternative."""
    if text is None or not text.strip():
        return [EMPTY_CHART]
    return [parse_chart(part, table) for part in split_top_level(text, "|")]
