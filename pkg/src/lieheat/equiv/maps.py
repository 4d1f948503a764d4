"""
Point transformations of the equivalence group of ``u_t = u_xx + F(t, x, u, u_x)``.

Every map sends ``(t, x, u)`` to ``(tbar, xbar, ubar)`` with ``tbar = T(t)``,
``xbar = eps*sqrt(T'(t))*x + X(t)`` and ``ubar = U(t, x, u)``. ``forward``
holds the new coordinates as expressions in the old ones; ``inverse`` holds
the old coordinates as expressions in the new ones, written with the same
names ``t``, ``x``, ``u``.
"""

import logging
from dataclasses import dataclass, field

import sympy as sp

from lieheat.algebra import span_coefficients
from lieheat.expr import (
    DEFAULT_OPTIONS,
    EMPTY_CHART,
    Chart,
    RewriteRule,
    SymbolTable,
    ZeroTestOptions,
    is_zero,
    localize,
    normalize,
)
from lieheat.fields import VectorField
from lieheat.parser import lower_text, split_top_level
from lieheat.utils import ClassViolation, MapError

logger = logging.getLogger(__name__)

CONCRETE = "concrete"
ABSTRACT = "abstract"
COMPONENTS = ("t", "x", "u")


@dataclass(frozen=True)
class EquivalenceMap:
    """
    Element of the equivalence group.

    Attributes
    ----------
    kind : str
        ``concrete`` for explicit elementary components with a supplied
        inverse, ``abstract`` for the generic element built from the atoms
        ``T(t)``, ``X(t)``, ``U(t, x, u)`` and ``S(t) = sqrt(T'(t))``.
    forward : tuple of sympy.Expr
        ``(tbar, xbar, ubar)`` in the old coordinates.
    inverse : tuple of sympy.Expr or None
        ``(t, x, u)`` in the new coordinates. None for abstract maps.
    eps : sympy.Expr
        Orientation of ``x``, ``1``, ``-1`` or a sign symbol.
    chart : Chart
        Chart the components were localized on.
    table : SymbolTable
        Declarations of every symbol in the components.
    text : str
        Source text, kept for reports.
    """

    kind: str
    forward: tuple
    inverse: tuple | None
    eps: sp.Expr = sp.Integer(1)
    chart: Chart = EMPTY_CHART
    table: SymbolTable = field(default=None, compare=False, repr=False)
    text: str = ""

    @property
    def is_concrete(self) -> bool:
        return self.kind == CONCRETE


def _localized(components, table: SymbolTable, chart: Chart) -> tuple:
    return tuple(
        normalize(localize(sp.sympify(c), table, chart, strict=True), table) for c in components
    )


def substitute_components(outer: tuple, inner: tuple, table: SymbolTable) -> tuple:
    """Components of ``outer`` after ``inner``: (t, x, u) in ``outer`` become ``inner``."""
    mapping = dict(zip(table.coordinates(), inner))
    return tuple(normalize(sp.sympify(c).xreplace(mapping), table) for c in outer)


def group_violations(
    forward: tuple,
    table: SymbolTable,
    chart: Chart = EMPTY_CHART,
    options: ZeroTestOptions = DEFAULT_OPTIONS,
) -> list:
    """Conditions of the equivalence group that ``forward`` fails, as messages."""
    t, x, u = table.coordinates()
    t_bar, x_bar, u_bar = forward
    checks = (
        (sp.diff(t_bar, x), "tbar depends on x"),
        (sp.diff(t_bar, u), "tbar depends on u"),
        (sp.diff(x_bar, u), "xbar depends on u"),
        (sp.diff(x_bar, x, 2), "xbar is not affine in x"),
        (sp.diff(x_bar, x) ** 2 - sp.diff(t_bar, t), "xbar_x^2 differs from tbar_t"),
    )
    problems = [message for value, message in checks if not is_zero(value, table, chart, options)]
    if is_zero(sp.diff(u_bar, u), table, chart, options):
        problems.append("ubar does not depend on u")
    return problems


def _orientation(x_bar: sp.Expr, table: SymbolTable) -> sp.Expr:
    slope = normalize(sp.diff(x_bar, table.independent["x"]), table)
    if slope.is_extended_negative:
        return sp.Integer(-1)
    return sp.Integer(1)


def concrete_map(
    forward,
    inverse,
    table: SymbolTable,
    chart: Chart = EMPTY_CHART,
    options: ZeroTestOptions = DEFAULT_OPTIONS,
    check_group: bool = True,
    text: str = "",
) -> EquivalenceMap:
    """
    Build a concrete map and verify its supplied inverse.

    Parameters
    ----------
    forward : tuple
        ``(tbar, xbar, ubar)`` in terms of ``t``, ``x``, ``u``.
    inverse : tuple
        ``(t, x, u)`` in terms of the new coordinates, reusing the names.
    table : SymbolTable
        Declarations.
    chart : Chart, optional
        Chart on which absolute values are resolved and identities tested.
    options : ZeroTestOptions, optional
        Zero-test seed and sample count.
    check_group : bool, optional
        Reject maps outside the equivalence group. Default is True.
    text : str, optional
        Source text for reports.

    Raises
    ------
    MapError
        If the inverse does not compose to the identity either way, or if
        ``check_group`` and the map is not in the equivalence group.
    """
    forward = _localized(forward, table, chart)
    inverse = _localized(inverse, table, chart)
    identity = table.coordinates()
    for label, composite in (
        ("inverse after forward", substitute_components(inverse, forward, table)),
        ("forward after inverse", substitute_components(forward, inverse, table)),
    ):
        for old, new in zip(identity, composite):
            if not is_zero(new - old, table, chart, options):
                raise MapError(f"supplied inverse is wrong: {label} sends {old} to {new}")
    if check_group:
        problems = group_violations(forward, table, chart, options)
        if problems:
            raise MapError(f"map is outside the equivalence group: {'; '.join(problems)}")
    return EquivalenceMap(CONCRETE, forward, inverse, _orientation(forward[1], table), chart, table, text)


def identity_map(table: SymbolTable) -> EquivalenceMap:
    coordinates = table.coordinates()
    return EquivalenceMap(CONCRETE, coordinates, coordinates, sp.Integer(1), EMPTY_CHART, table, "identity")


def inverse(m: EquivalenceMap) -> EquivalenceMap:
    """The supplied inverse of a concrete map, as a map."""
    if not m.is_concrete:
        raise MapError("abstract maps carry no explicit inverse")
    return EquivalenceMap(
        CONCRETE, m.inverse, m.forward, m.eps, m.chart, m.table, f"inverse of {m.text or 'map'}"
    )


def _chart_key(chart: Chart) -> tuple:
    return set(chart.signs), set(chart.conditions), set(chart.bindings)


def _common_chart(first: Chart, second: Chart) -> Chart:
    if first == EMPTY_CHART:
        return second
    if second == EMPTY_CHART:
        return first
    if _chart_key(first) != _chart_key(second):
        raise MapError(f"charts '{first}' and '{second}' are not compatible")
    return first


def compose(m1: EquivalenceMap, m2: EquivalenceMap) -> EquivalenceMap:
    """
    The map ``m2`` after ``m1``.

    Raises
    ------
    MapError
        If a map is abstract or the charts differ.
    """
    if not (m1.is_concrete and m2.is_concrete):
        raise MapError("only concrete maps compose")
    table = m1.table
    chart = _common_chart(m1.chart, m2.chart)
    forward = substitute_components(m2.forward, m1.forward, table)
    backward = substitute_components(m1.inverse, m2.inverse, table)
    text = f"({m2.text or 'map'}) after ({m1.text or 'map'})"
    return EquivalenceMap(CONCRETE, forward, backward, m1.eps * m2.eps, chart, table, text)


def _declare_generic_atoms(table: SymbolTable):
    for declaration in ("T(t)", "X(t)", "U(t, x, u)", "S(t)"):
        if declaration.partition("(")[0] not in table.atoms:
            table.declare(declaration)
    if "eps" not in table.signs:
        table.declare_sign("eps")
    t = table.independent["t"]
    T, S = table.atom("T"), table.atom("S")
    table.add_rule(RewriteRule.from_lhs(S(t) ** 2, sp.diff(T(t), t), "S(t) = sqrt(T'(t))"))
    table.add_rule(
        RewriteRule.from_lhs(sp.diff(S(t), t), sp.diff(T(t), t, 2) / (2 * S(t)), "S(t) = sqrt(T'(t))")
    )


def abstract_map(
    table: SymbolTable,
    t_bar=None,
    x_bar=None,
    u_bar=None,
    chart: Chart = EMPTY_CHART,
) -> EquivalenceMap:
    """
    The generic element of the equivalence group.

    The map works on a copy of ``table`` with the atoms ``T(t)``, ``X(t)``,
    ``U(t, x, u)``, ``S(t)``, the sign ``eps`` and the rules
    ``S(t)^2 -> T'(t)`` and ``S'(t) -> T''(t)/(2*S(t))``. Components given
    as text or expressions replace the generic ones, which is how maps
    outside the group are built for class-preservation checks.
    """
    table = table.copy()
    _declare_generic_atoms(table)
    t, x, u = table.coordinates()
    eps = table.signs["eps"]
    generic = (
        table.atom("T")(t),
        eps * table.atom("S")(t) * x + table.atom("X")(t),
        table.atom("U")(t, x, u),
    )
    forward = []
    for given, default in zip((t_bar, x_bar, u_bar), generic):
        if given is None:
            forward.append(default)
        elif isinstance(given, str):
            forward.append(lower_text(given, table))
        else:
            forward.append(sp.sympify(given))
    forward = _localized(forward, table, chart)
    return EquivalenceMap(ABSTRACT, forward, None, eps, chart, table, "generic equivalence map")


def parse_components(text: str, table: SymbolTable, what: str = "map") -> tuple:
    """
    Parse ``"t -> 4*t, x -> 2*x, u -> u"``.

    Omitted components are left unchanged.
    """
    values = dict(zip(COMPONENTS, table.coordinates()))
    for part in split_top_level(text, ","):
        if not part.strip():
            continue
        name, arrow, value = part.partition("->")
        name = name.strip()
        if not arrow or name not in values:
            raise MapError(f"{what} components read 't -> ...', 'x -> ...', 'u -> ...'. Got '{part.strip()}'")
        values[name] = lower_text(value, table)
    return tuple(values[name] for name in COMPONENTS)


def parse_map(
    text: str,
    inverse_text: str,
    table: SymbolTable,
    chart: Chart = EMPTY_CHART,
    options: ZeroTestOptions = DEFAULT_OPTIONS,
    check_group: bool = True,
) -> EquivalenceMap:
    """Parse a concrete map and its inverse, see `parse_components` and `concrete_map`."""
    forward = parse_components(text, table, "map")
    backward = parse_components(inverse_text, table, "inverse")
    return concrete_map(forward, backward, table, chart, options, check_group, text.strip())


def check_reduced_class(
    q: VectorField,
    table: SymbolTable,
    chart: Chart = EMPTY_CHART,
    options: ZeroTestOptions = DEFAULT_OPTIONS,
) -> VectorField:
    """Return ``q`` if it reads ``2a(t) d_t + (a'(t) x + b(t)) d_x + f d_u``."""
    t, x, u = table.coordinates()
    tau, xi, _ = q.components
    checks = (
        (sp.diff(tau, x), "tau depends on x"),
        (sp.diff(tau, u), "tau depends on u"),
        (sp.diff(xi, u), "xi depends on u"),
        (sp.diff(xi, x) - sp.diff(tau, t) / 2, "xi_x differs from tau_t/2"),
    )
    for value, message in checks:
        if not is_zero(value, table, chart, options):
            raise ClassViolation(f"field outside the reduced class: {message}")
    return q


def pushforward_field(
    m: EquivalenceMap, q: VectorField, options: ZeroTestOptions = DEFAULT_OPTIONS
) -> VectorField:
    """
    Image of the field ``q`` under ``m``.

    The components are ``q(tbar)``, ``q(xbar)`` and ``q(ubar)``. For a
    concrete map they are rewritten in the new coordinates through the
    inverse; for an abstract map they stay in the old coordinates, so that
    the ``d_tbar`` coefficient of ``2a d_t + ...`` reads ``2a T'(t)``.

    Raises
    ------
    ClassViolation
        If ``m`` is abstract and ``q`` is outside the reduced class.
    """
    table = m.table
    q = q.map(lambda c: localize(c, table, m.chart, strict=True))
    if not m.is_concrete:
        check_reduced_class(q, table, m.chart, options)
    image = VectorField(*(q.apply(c, table) for c in m.forward))
    if m.is_concrete:
        image = image.xreplace(dict(zip(table.coordinates(), m.inverse)))
    return image.normalized(table)


def basis_form_preserved(
    m: EquivalenceMap, basis, options: ZeroTestOptions = DEFAULT_OPTIONS
) -> list:
    """
    For each field of ``basis``, whether ``m`` keeps its form.

    The image must lie in the constant-coefficient span of ``basis`` and
    have the coefficient pattern of the field: the same vanishing
    components, each depending on the same coordinates.
    """
    table = m.table
    basis = [q.map(lambda c: localize(c, table, m.chart, strict=True)) for q in basis]
    preserved = []
    for q in basis:
        image = pushforward_field(m, q, options)
        coefficients = span_coefficients(image, basis, table, m.chart, options)
        logger.debug("image %s of %s has coefficients %s", image, q, coefficients)
        pattern = _coefficient_pattern(q, table, m.chart, options)
        same = _coefficient_pattern(image, table, m.chart, options) == pattern
        preserved.append(coefficients is not None and same)
    return preserved


def _coefficient_pattern(q: VectorField, table: SymbolTable, chart: Chart, options) -> tuple:
    coordinates = table.coordinates()
    pattern = []
    for c in q.components:
        if is_zero(c, table, chart, options):
            pattern.append(None)
        else:
            depends = (s for s in coordinates if not is_zero(sp.diff(c, s), table, chart, options))
            pattern.append(frozenset(depends))
    return tuple(pattern)
