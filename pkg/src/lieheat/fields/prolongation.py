"""
Second prolongation of point fields and the invariance test for
``u_t = u_xx + F(t, x, u, u_x)``.
"""

import logging
from dataclasses import dataclass, field

import sympy as sp

from lieheat.expr import (
    DEFAULT_OPTIONS,
    EMPTY_CHART,
    Chart,
    SymbolTable,
    ZeroTestOptions,
    is_zero,
    localize,
    normalize,
    total_diff,
)
from lieheat.fields.vector_field import VectorField
from lieheat.utils import ClassViolation, KernelInconsistency, SplitError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Prolongation2:
    """
    A point field together with its second-order prolongation coefficients.

    Attributes
    ----------
    field : VectorField
        Base field.
    phi_t, phi_x, phi_xx : sympy.Expr
        Coefficients of ``d_{u_t}``, ``d_{u_x}`` and ``d_{u_xx}``.
    """

    field: VectorField
    phi_t: sp.Expr
    phi_x: sp.Expr
    phi_xx: sp.Expr


def prolong2(q: VectorField, table: SymbolTable) -> Prolongation2:
    """
    Second prolongation of ``q``.

    ``phi^t = D_t eta - u_t D_t tau - u_x D_t xi``,
    ``phi^x = D_x eta - u_t D_x tau - u_x D_x xi`` and
    ``phi^xx = D_x phi^x - u_tx D_x tau - u_xx D_x xi``.
    """
    q.check_point(table)
    u_t, u_x = table.jet("u", 1, 0), table.jet("u", 0, 1)
    u_tx, u_xx = table.jet("u", 1, 1), table.jet("u", 0, 2)
    tau, xi, eta = q.components

    def d(e, direction):
        return total_diff(e, direction, table, max_order=2)

    phi_t = d(eta, "t") - u_t * d(tau, "t") - u_x * d(xi, "t")
    phi_x = d(eta, "x") - u_t * d(tau, "x") - u_x * d(xi, "x")
    phi_xx = d(phi_x, "x") - u_tx * d(tau, "x") - u_xx * d(xi, "x")
    return Prolongation2(
        q,
        normalize(phi_t, table),
        normalize(phi_x, table),
        normalize(phi_xx, table),
    )


def check_class_member(F: sp.Expr, table: SymbolTable) -> sp.Expr:
    """Return ``F`` if it depends on jets through ``u`` and ``u_x`` only."""
    F = sp.sympify(F)
    allowed = {table.jet("u"), table.jet("u", 0, 1)}
    for symbol in F.free_symbols:
        if table.jet_of(symbol) is not None and symbol not in allowed:
            raise ClassViolation(f"class violation: F depends on {symbol}")
    return F


def _polynomial_variables(expr: sp.Expr, candidates: list) -> list:
    variables = [v for v in candidates if expr.has(v)]
    while variables:
        try:
            numerator, denominator = sp.fraction(sp.together(expr))
            if not denominator.has(*variables):
                sp.Poly(numerator, *variables)
                return variables
        except sp.PolynomialError:
            pass
        variables = variables[:-1]
    return []


def split_by_jet_monomials(r, variables, table: SymbolTable | None = None) -> list:
    """
    Coefficients of the monomials of ``r`` in the jet ``variables``.

    Parameters
    ----------
    r : Residual or sympy.Expr
        Expression polynomial in ``variables``.
    variables : list of sympy.Symbol or str
        Jet variables to split by.
    table : SymbolTable, optional
        Needed when ``r`` is a bare expression or ``variables`` are names.

    Returns
    -------
    list of (sympy.Expr, sympy.Expr)
        Monomial and its normalized nonzero coefficient, by increasing degree.

    Raises
    ------
    SplitError
        If ``r`` is not polynomial in ``variables``.
    """
    if isinstance(r, Residual):
        expr, table = r.expr, r.table
    else:
        expr = sp.sympify(r)
    if expr == 0:
        return []
    variables = [table.lookup(v) if isinstance(v, str) else v for v in variables]
    numerator, denominator = sp.fraction(sp.together(expr))
    if denominator.has(*variables):
        raise SplitError(f"denominator {denominator} depends on a splitting variable")
    try:
        poly = sp.Poly(numerator, *variables)
    except sp.PolynomialError as e:
        raise SplitError(f"residual is not polynomial in {', '.join(map(str, variables))}") from e

    system = []
    for exponents, coefficient in poly.as_dict(native=False).items():
        coefficient = normalize(coefficient / denominator, table)
        if coefficient == 0:
            continue
        monomial = sp.Mul(*(v**k for v, k in zip(variables, exponents)))
        system.append((sum(exponents), exponents, monomial, coefficient))
    system.sort(key=lambda item: (item[0], item[1]))
    return [(monomial, coefficient) for _, _, monomial, coefficient in system]


@dataclass(frozen=True)
class Residual:
    """
    Left-hand side of the invariance criterion restricted to the equation.

    Attributes
    ----------
    expr : sympy.Expr
        Normalized residual over jets of order at most two (three when the
        field is not in the reduced class), free of ``u_t`` and ``u_tx``.
    chart : Chart
        Chart the residual was localized on.
    rules : tuple of RewriteRule
        Rules active when the residual was built.
    table : SymbolTable
        Declarations of every symbol in ``expr``.
    """

    expr: sp.Expr
    chart: Chart = EMPTY_CHART
    rules: tuple = ()
    table: SymbolTable = field(default=None, compare=False, repr=False)

    def is_zero(self, options: ZeroTestOptions = DEFAULT_OPTIONS):
        return is_zero(self.expr, self.table, self.chart, options)

    def split(self, variables) -> list:
        return split_by_jet_monomials(self, variables)

    def monomial_system(self) -> list:
        """Split by the highest jets the residual is polynomial in."""
        candidates = [self.table.jet("u", 0, 3), self.table.jet("u", 0, 2), self.table.jet("u", 0, 1)]
        variables = _polynomial_variables(self.expr, candidates)
        if not variables:
            return [] if self.expr == 0 else [(sp.Integer(1), self.expr)]
        return self.split(variables)


def invariance_residual(
    q: VectorField,
    F: sp.Expr,
    table: SymbolTable,
    chart: Chart = EMPTY_CHART,
    options: ZeroTestOptions = DEFAULT_OPTIONS,
) -> Residual:
    """
    Invariance criterion of ``u_t = u_xx + F`` under ``q``.

    Builds ``phi^t - phi^xx - tau F_t - xi F_x - eta F_u - phi^x F_{u_x}``,
    replaces ``u_tx`` by ``D_x(u_xx + F)`` and then ``u_t`` by ``u_xx + F``,
    and normalizes. When ``tau`` does not depend on ``x`` and ``u`` the
    coefficient of ``u_xxx`` must cancel; this is checked.

    Raises
    ------
    ClassViolation
        If ``F`` depends on ``u_t``, ``u_xx`` or higher jets.
    ChartError
        If an absolute value can not be resolved on ``chart``.
    KernelInconsistency
        If the ``u_xxx`` coefficient survives for a field of the reduced class.
    """
    t, x, u = table.coordinates()
    u_t, u_x = table.jet("u", 1, 0), table.jet("u", 0, 1)
    u_tx, u_xx, u_xxx = table.jet("u", 1, 1), table.jet("u", 0, 2), table.jet("u", 0, 3)

    table = table.with_chart(chart)
    F = localize(check_class_member(F, table), table, strict=True)
    q = q.map(lambda c: localize(c, table, strict=True))
    prolongation = prolong2(q, table)
    tau, xi, eta = q.components

    criterion = (
        prolongation.phi_t
        - prolongation.phi_xx
        - tau * sp.diff(F, t)
        - xi * sp.diff(F, x)
        - eta * sp.diff(F, u)
        - prolongation.phi_x * sp.diff(F, u_x)
    )
    evolution = u_xx + F
    criterion = sp.expand(criterion).xreplace(
        {u_tx: total_diff(evolution, "x", table, max_order=3), u_t: evolution}
    )

    if normalize(sp.diff(tau, x), table) == 0 and normalize(sp.diff(tau, u), table) == 0:
        third = sp.diff(criterion, u_xxx)
        if third != 0 and not is_zero(third, table, options=options):
            raise KernelInconsistency(f"u_xxx coefficient {third} did not cancel")
        criterion = criterion.xreplace({u_xxx: 0})

    residual = normalize(criterion, table)
    logger.debug("invariance residual on chart %s: %s", chart, residual)
    return Residual(residual, chart, tuple(table.rules), table)


def generic_atom(table: SymbolTable, name: str, templates: tuple):
    """Apply the atom ``name`` to its templates, declaring it on ``table`` if needed."""
    if name not in table.atoms:
        table.declare_atom(name, templates)
    return table.atom(name)(*(table.lookup(v) for v in templates))


def _generic_parts(table, a, b, f, F):
    t = table.independent["t"]
    a = generic_atom(table, "a", ("t",)) if a is None else sp.sympify(a)
    b = generic_atom(table, "b", ("t",)) if b is None else sp.sympify(b)
    f = generic_atom(table, "f", ("t", "x", "u")) if f is None else sp.sympify(f)
    F = generic_atom(table, "F", ("t", "x", "u", "u_x")) if F is None else sp.sympify(F)
    return t, a, b, f, F


def reduced_class_field(table: SymbolTable, a=None, b=None, f=None) -> VectorField:
    """The general symmetry form ``2a d_t + (a' x + b) d_x + f d_u``."""
    table = table.copy()
    t, a, b, f, _ = _generic_parts(table, a, b, f, sp.Integer(0))
    x = table.independent["x"]
    return VectorField(2 * a, sp.diff(a, t) * x + b, f)


def determining_residual(table: SymbolTable, a=None, b=None, f=None, F=None) -> sp.Expr:
    """
    Invariance residual of the reduced class field for a generic ``F``.

    Missing arguments default to the atoms ``a(t)``, ``b(t)``, ``f(t, x, u)``
    and ``F(t, x, u, u_x)``, which are declared on a copy of ``table`` if needed.
    """
    table = table.copy()
    _, a, b, f, F = _generic_parts(table, a, b, f, F)
    q = reduced_class_field(table, a, b, f)
    return invariance_residual(q, F, table).expr


def determining_equation(table: SymbolTable, a=None, b=None, f=None, F=None) -> sp.Expr:
    """
    Classifying equation written out term by term, left minus right side.

    ``f_t - u_x(a'' x + b') + (f_u - 2a')F`` minus
    ``f_xx + 2u_x f_xu + u_x^2 f_uu + 2a F_t + (a' x + b)F_x + f F_u
    + f_x F_{u_x} + u_x(f_u - a')F_{u_x}``.
    """
    table = table.copy()
    t, a, b, f, F = _generic_parts(table, a, b, f, F)
    x, u = table.independent["x"], table.jet("u")
    u_x = table.jet("u", 0, 1)
    a1, a2, b1 = sp.diff(a, t), sp.diff(a, t, 2), sp.diff(b, t)
    left = sp.diff(f, t) - u_x * (a2 * x + b1) + (sp.diff(f, u) - 2 * a1) * F
    right = (
        sp.diff(f, x, 2)
        + 2 * u_x * sp.diff(f, x, u)
        + u_x**2 * sp.diff(f, u, 2)
        + 2 * a * sp.diff(F, t)
        + (a1 * x + b) * sp.diff(F, x)
        + f * sp.diff(F, u)
        + sp.diff(f, x) * sp.diff(F, u_x)
        + u_x * (sp.diff(f, u) - a1) * sp.diff(F, u_x)
    )
    return normalize(left - right, table)
