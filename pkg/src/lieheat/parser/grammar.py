"""
Concrete syntax of expressions.

The grammar is built with ``pyparsing``'s operator-precedence helper. Every
operand is wrapped in ``pyparsing.Located`` so that each `ParseTree` node
knows the part of the input it came from. Precedence, tightest first::

    ^        right associative
    unary -  (so -x^2 is -(x^2))
    * /      left associative
    + -      left associative

The formal grammar is listed in the README.
"""

from dataclasses import dataclass

import pyparsing as pp

from lieheat.utils import ParseError

pp.ParserElement.enable_packrat()

OPERATORS = "+-*/^"


@dataclass(frozen=True)
class SourceSpan:
    """
    Location of a node in the input text.

    Attributes
    ----------
    start : int
        Character offset of the first character.
    end : int
        Character offset one past the last character.
    line : int
        1-based line of ``start``.
    column : int
        1-based column of ``start``.
    """

    start: int
    end: int
    line: int
    column: int

    @classmethod
    def of(cls, text: str, start: int, end: int | None = None) -> "SourceSpan":
        end = start if end is None else end
        return cls(start, end, pp.lineno(start, text), pp.col(start, text))

    def contains(self, other: "SourceSpan") -> bool:
        return self.start <= other.start and other.end <= self.end


@dataclass(frozen=True)
class ParseTree:
    """
    Node of the concrete syntax tree.

    Attributes
    ----------
    kind : str
        One of ``number``, ``name``, ``call``, ``prime``, ``deriv``,
        ``paren``, ``neg`` and ``binop``.
    value : str or tuple
        Literal text, name, operator, or for ``prime`` and ``deriv`` the atom
        name with its derivative data.
    children : tuple of ParseTree
        Operands in source order.
    span : SourceSpan
        Source location.
    """

    kind: str
    value: object
    children: tuple
    span: SourceSpan

    def render(self) -> str:
        """Print the tree back to text; equal to the input modulo whitespace."""
        if self.kind in ("number", "name"):
            return str(self.value)
        if self.kind == "paren":
            return f"({self.children[0].render()})"
        if self.kind == "neg":
            return f"-{self.children[0].render()}"
        if self.kind == "binop":
            left, right = self.children
            return f"{left.render()} {self.value} {right.render()}"
        args = ", ".join(child.render() for child in self.children)
        if self.kind == "call":
            return f"{self.value}({args})"
        if self.kind == "prime":
            name, order = self.value
            return f"{name}{chr(39) * order}({args})"
        name, pairs, applied = self.value
        head = ", ".join([name] + [f"{var}, {count}" for var, count in pairs])
        return f"D[{head}]({args})" if applied else f"D[{head}]"


class _Pending:
    def __init__(self, kind, value, children=()):
        self.kind = kind
        self.value = value
        self.children = tuple(children)


def _grammar() -> pp.ParserElement:
    expr = pp.Forward()
    ident = pp.Regex(r"[A-Za-z_][A-Za-z0-9_]*")
    integer = pp.Regex(r"\d+")
    number = pp.Regex(r"\d+\.\d*|\.\d+|\d+")
    lpar, rpar = pp.Suppress("("), pp.Suppress(")")
    comma = pp.Suppress(",")
    arguments = pp.Optional(pp.DelimitedList(expr, delim=","))

    number_node = number.copy().set_parse_action(lambda t: _Pending("number", t[0]))
    name_node = ident.copy().set_parse_action(lambda t: _Pending("name", t[0]))
    call_node = (ident + lpar + pp.Group(arguments) + rpar).set_parse_action(
        lambda t: _Pending("call", t[0], t[1])
    )
    prime_node = (ident + pp.Regex(r"'+") + lpar + pp.Group(arguments) + rpar).set_parse_action(
        lambda t: _Pending("prime", (t[0], len(t[1])), t[2])
    )
    pair = pp.Group(comma + ident + comma + integer)
    deriv_node = (
        pp.Suppress(pp.Keyword("D") + "[")
        + ident
        + pp.Group(pp.OneOrMore(pair))
        + pp.Suppress("]")
        + pp.Optional(pp.Group(lpar + arguments + rpar))
    ).set_parse_action(_deriv_action)
    paren_node = (lpar + expr + rpar).set_parse_action(lambda t: _Pending("paren", "()", [t[0]]))

    operand = pp.Located(deriv_node | prime_node | call_node | paren_node | name_node | number_node)
    operand.set_parse_action(_located_action)

    expr <<= pp.infix_notation(
        operand,
        [
            (pp.Literal("^"), 2, pp.OpAssoc.RIGHT, _binary_action),
            (pp.Literal("-"), 1, pp.OpAssoc.RIGHT, _negation_action),
            (pp.one_of("* /"), 2, pp.OpAssoc.LEFT, _binary_action),
            (pp.one_of("+ -"), 2, pp.OpAssoc.LEFT, _binary_action),
        ],
    )
    return expr


def _deriv_action(t):
    pairs = tuple((p[0], int(p[1])) for p in t[1])
    applied = len(t) > 2
    children = list(t[2]) if applied else []
    return _Pending("deriv", (t[0], pairs, applied), children)


def _located_action(s, loc, t):
    start, pending, end = t[0], t[1][0], t[2]
    return ParseTree(pending.kind, pending.value, pending.children, SourceSpan.of(s, start, end))


def _binary_action(s, loc, t):
    items = list(t[0])
    if items[1] == "^":
        node = items[-1]
        for index in range(len(items) - 3, -1, -2):
            left = items[index]
            node = ParseTree("binop", "^", (left, node), _joined(s, left, node))
        return node
    node = items[0]
    for index in range(1, len(items), 2):
        right = items[index + 1]
        node = ParseTree("binop", items[index], (node, right), _joined(s, node, right))
    return node


def _negation_action(s, loc, t):
    items = list(t[0])
    node = items[-1]
    for _ in items[:-1]:
        node = ParseTree("neg", "-", (node,), SourceSpan.of(s, loc, node.span.end))
    return node


def _joined(s, left, right) -> SourceSpan:
    return SourceSpan.of(s, left.span.start, right.span.end)


_EXPRESSION = _grammar()


def _error_offset(text: str, loc: int) -> int:
    loc = min(max(loc, 0), len(text))
    while loc < len(text) and text[loc].isspace():
        loc += 1
    if loc < len(text) and text[loc] in OPERATORS:
        loc += 1
        while loc < len(text) and text[loc].isspace():
            loc += 1
    return loc


def parse_tree(text: str) -> ParseTree:
    """
    Parse ``text`` into a concrete syntax tree.

    Raises
    ------
    ParseError
        With the span of the first unexpected character. A dangling operator
        is reported just past the operator.
    """
    if not isinstance(text, str):
        raise TypeError(f"Expected type of text is str. Got {type(text)}.")
    if not text.strip():
        raise ParseError("empty expression", SourceSpan.of(text, 0))
    try:
        result = _EXPRESSION.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        offset = _error_offset(text, e.loc)
        found = "end of input" if offset >= len(text) else repr(text[offset])
        raise ParseError(f"syntax error: unexpected {found}", SourceSpan.of(text, offset)) from None
    except RecursionError:
        raise ParseError("expression nested too deeply", SourceSpan.of(text, 0)) from None
    return result[0]
