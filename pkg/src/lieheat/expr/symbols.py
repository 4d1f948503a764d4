"""
Declared names, charts and rewrite rules.

A `SymbolTable` owns every symbol an expression may contain: the independent
variables ``t`` and ``x``, the jet coordinates of the dependent families
(``u``, ``u_t``, ``u_x``, ``u_tx``, ... and the same for ``v``), atoms,
parameters, sign symbols and free symbols, together with the rewrite rules
that hold between atoms. A `Chart` fixes the signs needed to remove absolute
values.
"""

import difflib
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

from lieheat.expr.atoms import AtomApplication, atom_function
from lieheat.utils import ChartError, DeclarationError

logger = logging.getLogger(__name__)

INDEPENDENT = ("t", "x")
FAMILIES = ("u", "v")
INTERNAL_ORDER = 3
INPUT_ORDER = 2
RESERVED = frozenset(
    {"ln", "log", "exp", "sqrt", "arctan", "atan", "abs", "pi", "D", "dt", "dx", "du"}
)


def jet_name(family: str, t_order: int, x_order: int) -> str:
    """Name of the jet coordinate, e.g. ``jet_name("u", 1, 1) == "u_tx"``."""
    if t_order == 0 and x_order == 0:
        return family
    return f"{family}_{'t' * t_order}{'x' * x_order}"


@dataclass(frozen=True)
class Jet:
    """
    Position of a jet coordinate.

    Attributes
    ----------
    family : str
        Dependent variable the coordinate belongs to.
    t_order : int
        Number of t derivatives.
    x_order : int
        Number of x derivatives.
    """

    family: str
    t_order: int
    x_order: int

    @property
    def order(self) -> int:
        return self.t_order + self.x_order

    def shifted(self, direction: str) -> "Jet":
        if direction == "t":
            return Jet(self.family, self.t_order + 1, self.x_order)
        return Jet(self.family, self.t_order, self.x_order + 1)


@dataclass(frozen=True)
class AtomSpec:
    name: str
    templates: tuple

    @property
    def arity(self) -> int:
        return len(self.templates)

    def __call__(self, *args, orders=None):
        orders = tuple(orders) if orders is not None else (0,) * self.arity
        return atom_function(self.name, orders)(*args)


@dataclass(frozen=True)
class ParamSpec:
    """
    A real parameter with its admissibility constraints.

    Attributes
    ----------
    symbol : sympy.Symbol
        Parameter symbol.
    excluded : tuple of Fraction
        Values the parameter must not take.
    sign : int
        ``1`` for a positive parameter, ``-1`` for a negative one, ``0`` if
        the sign is free.
    """

    symbol: sp.Symbol
    excluded: tuple = ()
    sign: int = 0

    def admits(self, value) -> bool:
        value = Fraction(str(value))
        if value in self.excluded:
            return False
        if self.sign and (value > 0) != (self.sign > 0):
            return False
        return not (self.sign and value == 0)


@dataclass(frozen=True)
class RewriteRule:
    """
    Oriented identity between atoms, ``lhs -> rhs``.

    The left-hand side is an atom application on its template variables,
    possibly differentiated (``alpha''(t)``) or raised to an integer power
    (``g(t)^2``). The right-hand side is expressed in the same template
    variables.

    Attributes
    ----------
    atom_name : str
        Atom the rule rewrites.
    orders : tuple of int
        Derivative orders of the left-hand side.
    power : int
        Exponent of the left-hand side, ``1`` for a derivative rule.
    rhs : sympy.Expr
        Replacement in terms of the template variables.
    templates : tuple of sympy.Symbol
        Template variables of the atom.
    provenance : str
        Where the rule comes from, kept for reports.
    """

    atom_name: str
    orders: tuple
    power: int
    rhs: sp.Expr
    templates: tuple
    provenance: str = ""

    @classmethod
    def from_lhs(cls, lhs: sp.Expr, rhs: sp.Expr, provenance: str = "") -> "RewriteRule":
        power = 1
        base = lhs
        if lhs.is_Pow and lhs.exp.is_Integer and int(lhs.exp) >= 2:
            base, power = lhs.base, int(lhs.exp)
        if not isinstance(base, AtomApplication):
            raise DeclarationError(
                f"rule left-hand side must be an atom, a derivative or a power of one. Got {lhs}"
            )
        if len(set(base.args)) != len(base.args) or not all(
            isinstance(a, sp.Symbol) for a in base.args
        ):
            raise DeclarationError(
                f"rule left-hand side must be applied to its template variables. Got {lhs}"
            )
        if power > 1 and any(base.orders):
            raise DeclarationError(f"power rules apply to undifferentiated atoms. Got {lhs}")
        return cls(base.atom_name, base.orders, power, sp.sympify(rhs), base.args, provenance)

    def instantiate(self, app: AtomApplication) -> sp.Expr | None:
        """Rewrite a derivative of the rule atom, or return None if it does not match."""
        if self.power != 1 or app.atom_name != self.atom_name:
            return None
        if len(app.orders) != len(self.orders):
            return None
        extra = [a - r for a, r in zip(app.orders, self.orders)]
        if any(e < 0 for e in extra):
            return None
        value = self.rhs
        for var, count in zip(self.templates, extra):
            if count:
                value = sp.diff(value, var, count)
        return value.xreplace(dict(zip(self.templates, app.args)))

    def reduce_power(self, power: sp.Pow) -> sp.Expr | None:
        """Rewrite ``app**n`` with ``|n| >= power``, or return None if it does not match."""
        if self.power == 1:
            return None
        base, exponent = power.base, power.exp
        if not (isinstance(base, AtomApplication) and exponent.is_Integer):
            return None
        if base.atom_name != self.atom_name or any(base.orders):
            return None
        n = abs(int(exponent))
        if n < self.power:
            return None
        replacement = self.rhs.xreplace(dict(zip(self.templates, base.args)))
        value = replacement ** (n // self.power) * base ** (n % self.power)
        return value if exponent > 0 else 1 / value


@dataclass(frozen=True)
class Chart:
    """
    A region of the (t, x, u, u_x, ...) space on which signs are fixed.

    Attributes
    ----------
    signs : tuple of (str, int)
        Declared symbol name and its sign.
    conditions : tuple of (sympy.Expr, int)
        Compound expressions with a fixed sign, used only to resolve ``abs``.
    bindings : tuple of (str, sympy.Expr)
        Names fixed to a value on the chart, e.g. ``eps = 1``.
    text : str
        Source text of the chart.
    """

    signs: tuple = ()
    conditions: tuple = ()
    bindings: tuple = ()
    text: str = ""

    def sign_of(self, name: str) -> int:
        return dict(self.signs).get(name, 0)

    def binding_map(self, table: "SymbolTable") -> dict:
        return {table.lookup(name): value for name, value in self.bindings}

    def __str__(self) -> str:
        return self.text or "<any>"


EMPTY_CHART = Chart()


class SymbolTable:
    """
    Registry of every name an expression may mention.

    Parameters
    ----------
    families : tuple of str, optional
        Dependent variables. Default is ``("u", "v")``.
    """

    def __init__(self, families: tuple = FAMILIES):
        self.independent = {name: sp.Symbol(name, real=True) for name in INDEPENDENT}
        self.families = tuple(families)
        self.jets = {}
        self.jet_info = {}
        for family in self.families:
            for order in range(INTERNAL_ORDER + 1):
                for t_order in range(order + 1):
                    jet = Jet(family, t_order, order - t_order)
                    name = jet_name(family, jet.t_order, jet.x_order)
                    symbol = sp.Symbol(name, real=True)
                    self.jets[name] = symbol
                    self.jet_info[symbol] = jet
        self.atoms = {}
        self.params = {}
        self.signs = {}
        self.symbols = {}
        self.templates = {}
        self.rules = []
        self.chart = EMPTY_CHART

    def copy(self) -> "SymbolTable":
        clone = SymbolTable.__new__(SymbolTable)
        clone.independent = dict(self.independent)
        clone.families = self.families
        clone.jets = dict(self.jets)
        clone.jet_info = dict(self.jet_info)
        clone.atoms = dict(self.atoms)
        clone.params = dict(self.params)
        clone.signs = dict(self.signs)
        clone.symbols = dict(self.symbols)
        clone.templates = dict(self.templates)
        clone.rules = list(self.rules)
        clone.chart = self.chart
        return clone

    def with_chart(self, chart: Chart) -> "SymbolTable":
        """A copy of the table whose signs and bindings default to ``chart``."""
        clone = self.copy()
        clone.chart = chart
        return clone

    # ----- lookups -----

    def names(self) -> dict:
        """Every declared name mapped to its kind."""
        kinds = {name: "independent" for name in self.independent}
        kinds.update({name: "jet" for name in self.jets})
        kinds.update({name: "atom" for name in self.atoms})
        kinds.update({name: "param" for name in self.params})
        kinds.update({name: "sign" for name in self.signs})
        kinds.update({name: "symbol" for name in self.symbols})
        return kinds

    def _missing(self, name: str, what: str = "name") -> DeclarationError:
        suggestions = difflib.get_close_matches(name, list(self.names()), n=3, cutoff=0.6)
        return DeclarationError(f"undeclared {what} '{name}'", name, suggestions)

    def lookup(self, name: str) -> sp.Symbol:
        """Return the symbol declared as ``name``."""
        for registry in (self.independent, self.jets, self.symbols, self.signs):
            if name in registry:
                return registry[name]
        if name in self.params:
            return self.params[name].symbol
        raise self._missing(name)

    def atom(self, name: str) -> AtomSpec:
        if name not in self.atoms:
            raise self._missing(name, "atom")
        return self.atoms[name]

    def is_declared(self, name: str) -> bool:
        return name in self.names()

    def jet(self, family: str, t_order: int = 0, x_order: int = 0) -> sp.Symbol:
        if t_order + x_order > INTERNAL_ORDER:
            raise DeclarationError(f"jet order {t_order + x_order} is not represented")
        return self.jets[jet_name(family, t_order, x_order)]

    def jet_of(self, symbol: sp.Basic) -> Jet | None:
        return self.jet_info.get(symbol)

    def coordinates(self, family: str = "u") -> tuple:
        return self.independent["t"], self.independent["x"], self.jet(family)

    def is_known_symbol(self, symbol: sp.Symbol) -> bool:
        return symbol in self.jet_info or symbol in set(self.independent.values()) or (
            symbol.name in self.names() and self.lookup(symbol.name) == symbol
        )

    @property
    def sign_symbols(self) -> set:
        return set(self.signs.values())

    @property
    def param_symbols(self) -> dict:
        return {spec.symbol: spec for spec in self.params.values()}

    # ----- declarations -----

    def _check_new(self, name: str):
        if not name.isidentifier():
            raise DeclarationError(f"'{name}' is not a valid name", name)
        if name in RESERVED:
            raise DeclarationError(f"'{name}' is reserved", name)
        if name in self.names() or name in self.templates:
            raise DeclarationError(f"'{name}' is already declared", name)

    def declare_atom(self, name: str, templates) -> AtomSpec:
        """Declare an atom ``name`` of the given template variables."""
        self._check_new(name)
        symbols = []
        for template in templates:
            if template in self.independent:
                symbols.append(self.independent[template])
            elif template in self.jets:
                symbols.append(self.jets[template])
            elif template in self.names():
                raise DeclarationError(
                    f"template '{template}' of atom {name} clashes with a declared name",
                    template,
                )
            else:
                symbols.append(self.templates.setdefault(template, sp.Symbol(template, real=True)))
        if len(set(symbols)) != len(symbols):
            raise DeclarationError(f"atom {name} repeats a template variable", name)
        spec = AtomSpec(name, tuple(symbols))
        self.atoms[name] = spec
        logger.debug("declared atom %s%s", name, tuple(map(str, symbols)))
        return spec

    def declare_param(self, name: str, excluded=(), sign: int = 0) -> sp.Symbol:
        self._check_new(name)
        assumptions = {"real": True}
        if sign > 0:
            assumptions["positive"] = True
        elif sign < 0:
            assumptions["negative"] = True
        symbol = sp.Symbol(name, **assumptions)
        excluded = tuple(Fraction(str(value)) for value in excluded)
        self.params[name] = ParamSpec(symbol, excluded, sign)
        return symbol

    def declare_sign(self, name: str) -> sp.Symbol:
        self._check_new(name)
        symbol = sp.Symbol(name, real=True, nonzero=True)
        self.signs[name] = symbol
        return symbol

    def declare_symbol(self, name: str) -> sp.Symbol:
        self._check_new(name)
        symbol = sp.Symbol(name, real=True)
        self.symbols[name] = symbol
        return symbol

    def add_rule(self, rule: RewriteRule):
        self.atom(rule.atom_name)
        self.rules.append(rule)

    def declare(self, text: str):
        """
        Apply one declaration line.

        Accepted forms are ``G(z)`` and ``H(z1, z2)`` for atoms,
        ``param q`` optionally followed by ``!= 0, 1, -1``, ``> 0`` or
        ``< 0``, ``sign eps`` and ``symbol w``.
        """
        text = text.strip()
        if not text:
            return
        head, _, rest = text.partition(" ")
        if head == "param":
            name, constraint = _split_param(rest)
            excluded, sign = _param_constraint(name, constraint)
            self.declare_param(name, excluded, sign)
        elif head == "sign":
            self.declare_sign(rest.strip())
        elif head == "symbol":
            self.declare_symbol(rest.strip())
        elif "(" in text and text.endswith(")"):
            name, _, args = text[:-1].partition("(")
            templates = [a.strip() for a in args.split(",") if a.strip()]
            if not templates:
                raise DeclarationError(f"atom {name.strip()} needs at least one template variable")
            self.declare_atom(name.strip(), templates)
        else:
            raise DeclarationError(f"can not understand declaration '{text}'")


def declared_name(text: str) -> str:
    """Name introduced by a declaration line such as ``"param q != 0"`` or ``"G(z)"``."""
    text = text.strip()
    head, _, rest = text.partition(" ")
    if head == "param":
        return _split_param(rest)[0]
    if head in ("sign", "symbol"):
        return rest.strip()
    return text.partition("(")[0].strip()


def _split_param(rest: str) -> tuple:
    rest = rest.strip()
    for op in ("!=", ">", "<"):
        if op in rest:
            name, _, value = rest.partition(op)
            return name.strip(), (op, value.strip())
    return rest, None


def _param_constraint(name: str, constraint) -> tuple:
    if constraint is None:
        return (), 0
    op, value = constraint
    try:
        if op == "!=":
            return tuple(Fraction(v.strip()) for v in value.split(",") if v.strip()), 0
        if Fraction(value) != 0:
            raise ValueError(value)
    except ValueError as e:
        raise DeclarationError(f"unsupported constraint on parameter {name}: {op} {value}") from e
    return (Fraction(0),), 1 if op == ">" else -1


def default_table(prelude=(), overrides=()) -> SymbolTable:
    """
    A symbol table with the families ``u`` and ``v`` and the given declarations.

    Prelude lines declaring a name that one of ``overrides`` declares again
    are skipped, and ``overrides`` are applied after the prelude.
    """
    replaced = {declared_name(line) for line in overrides if line.strip()}
    table = SymbolTable()
    for line in prelude:
        if declared_name(line) not in replaced:
            table.declare(line)
    for line in overrides:
        table.declare(line)
    return table


# ----- chart localization -----


def _positive_witnesses(table: SymbolTable, chart: Chart) -> dict:
    witnesses = {}
    for name, sign in chart.signs:
        symbol = table.lookup(name)
        witnesses[symbol] = sign * sp.Dummy(f"{name}_pos", positive=True)
    return witnesses


def _resolve_abs(arg: sp.Expr, chart: Chart, witnesses: dict):
    signed = arg.xreplace(witnesses)
    if signed.is_extended_nonnegative:
        return arg
    if signed.is_extended_nonpositive:
        return -arg
    for key, sign in chart.conditions:
        ratio = sp.cancel(arg / key)
        if ratio.is_number and ratio != 0:
            return sp.Abs(ratio) * sign * key
    return None


def localize(e: sp.Expr, table: SymbolTable, chart: Chart | None = None, strict: bool = False) -> sp.Expr:
    """
    Remove absolute values using the signs fixed by ``chart``.

    Chart bindings are substituted first. ``abs(a)`` becomes ``a`` or ``-a``
    when the sign of ``a`` follows from the chart, the declared signs of
    parameters or a compound chart condition. ``ln|a|`` of undetermined sign
    becomes ``ln(a)``, which has the same derivatives.

    Raises
    ------
    ChartError
        If ``strict`` and some ``abs`` could not be resolved.
    """
    e = sp.sympify(e)
    chart = table.chart if chart is None else chart
    if chart.bindings:
        e = e.xreplace(chart.binding_map(table))
    witnesses = _positive_witnesses(table, chart)
    unresolved = []

    def walk(node, under_log=False):
        if not node.args:
            return node
        if isinstance(node, sp.Abs):
            inner = walk(node.args[0])
            resolved = _resolve_abs(inner, chart, witnesses)
            if resolved is not None:
                return resolved
            if under_log:
                return inner
            unresolved.append(inner)
            return sp.Abs(inner)
        is_log = isinstance(node, sp.log)
        return node.func(*[walk(a, is_log) for a in node.args])

    result = walk(e)
    if strict and unresolved:
        shown = ", ".join(f"abs({a})" for a in unresolved[:3])
        raise ChartError(f"can not resolve {shown} on chart '{chart}'")
    return result
