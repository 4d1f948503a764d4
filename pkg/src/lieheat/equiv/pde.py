"""
Equations of the class ``u_t = u_xx + F(t, x, u, u_x)`` under changes of
variables.
"""

import logging
from dataclasses import dataclass, field

import sympy as sp

from lieheat.equiv.maps import EquivalenceMap
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
from lieheat.fields import VectorField, check_class_member, generic_atom, prolong2
from lieheat.parser import lower_text
from lieheat.utils import ClassViolation, KernelInconsistency, MapError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DependentSubstitution:
    """
    Change of dependent variable ``u = phi(t, x, v)``.

    Attributes
    ----------
    phi : sympy.Expr
        ``u`` in terms of ``t``, ``x`` and ``v``; ``phi_v`` does not vanish.
    chart : Chart
        Chart ``phi`` was localized on.
    table : SymbolTable
        Declarations of every symbol in ``phi``.
    text : str
        Source text, kept for reports.
    """

    phi: sp.Expr
    chart: Chart = EMPTY_CHART
    table: SymbolTable = field(default=None, compare=False, repr=False)
    text: str = ""


@dataclass(frozen=True)
class ClassForm:
    """
    A transformed equation written as ``w_t = w_xx + rhs``.

    Attributes
    ----------
    rhs : sympy.Expr
        Right-hand side in ``t``, ``x``, ``w`` and ``w_x``.
    factor : sympy.Expr
        Common factor removed from the transformed equation, the
        coefficient of ``w_t``.
    family : str
        Name of the new dependent variable.
    """

    rhs: sp.Expr
    factor: sp.Expr
    family: str = "u"


@dataclass(frozen=True)
class ClassPreservation:
    """
    Outcome of `verify_class_preservation`.

    Attributes
    ----------
    preserved : bool
        Whether ``ubar_tbar - ubar_xbarxbar`` depends on jets of order at
        most one on solutions.
    g_bar : sympy.Expr
        ``ubar_tbar - ubar_xbarxbar`` in the old coordinates.
    offending : tuple of str
        Higher jets with a nonvanishing coefficient in ``g_bar``.
    """

    preserved: bool
    g_bar: sp.Expr
    offending: tuple = ()


@dataclass(frozen=True)
class EquivalenceGenerator:
    """
    Infinitesimal generator of the equivalence group extended to ``F``.

    Attributes
    ----------
    field : VectorField
        ``theta d_t + (theta' x / 2 + chi) d_x + psi d_u``.
    eta_F : sympy.Expr
        Coefficient of ``d_F``.
    """

    field: VectorField
    eta_F: sp.Expr


def rename_family(e: sp.Expr, table: SymbolTable, source: str, target: str) -> sp.Expr:
    """Replace every jet of the dependent variable ``source`` by that of ``target``."""
    mapping = {}
    for symbol, jet in table.jet_info.items():
        if jet.family == source:
            mapping[symbol] = table.jet(target, jet.t_order, jet.x_order)
    return sp.sympify(e).xreplace(mapping)


def _class_form(
    equation: sp.Expr,
    family: str,
    table: SymbolTable,
    chart: Chart,
    options: ZeroTestOptions,
) -> ClassForm:
    w_t, w_xx = table.jet(family, 1, 0), table.jet(family, 0, 2)
    a = normalize(sp.diff(equation, w_t), table)
    b = normalize(sp.diff(equation, w_xx), table)
    if is_zero(a, table, chart, options):
        raise ClassViolation(f"transformed equation does not contain {w_t}")
    if not is_zero(a + b, table, chart, options):
        raise ClassViolation(
            f"transformed equation is not of the form {w_t} = {w_xx} + G: "
            f"coefficients {a} of {w_t} and {b} of {w_xx}"
        )
    rest = equation.xreplace({w_t: 0, w_xx: 0})
    rhs = normalize(-rest / a, table)
    allowed = {table.jet(family), table.jet(family, 0, 1)}
    extra = sorted(
        str(s) for s in rhs.free_symbols if table.jet_of(s) is not None and s not in allowed
    )
    if extra:
        raise ClassViolation(f"transformed right-hand side depends on {', '.join(extra)}")
    return ClassForm(rhs, a, family)


def transform_pde(
    m: EquivalenceMap, F: sp.Expr, options: ZeroTestOptions = DEFAULT_OPTIONS
) -> sp.Expr:
    """
    Right-hand side of the equation obtained from ``u_t = u_xx + F`` by ``m``.

    The result ``G`` is written in the new coordinates with the names
    ``t``, ``x``, ``u``: ``u`` solves the original equation iff ``ubar``
    solves ``ubar_tbar = ubar_xbarxbar + G``.

    Parameters
    ----------
    m : EquivalenceMap
        Concrete map with ``tbar`` depending on ``t`` and ``xbar`` on
        ``(t, x)`` only.
    F : sympy.Expr
        Right-hand side in ``t``, ``x``, ``u``, ``u_x``.
    options : ZeroTestOptions, optional
        Zero-test seed and sample count.

    Raises
    ------
    MapError
        If ``m`` is abstract or mixes ``u`` into the independent variables.
    ClassViolation
        If the transformed equation leaves the class, which happens exactly
        for maps outside the equivalence group.
    """
    if not m.is_concrete:
        raise MapError("PDE transformation needs a concrete map")
    table = m.table
    t, x, u = table.coordinates()
    u_x = table.jet("u", 0, 1)
    t_bar, x_bar, _ = m.forward
    for value in (sp.diff(t_bar, x), sp.diff(t_bar, u), sp.diff(x_bar, u)):
        if normalize(value, table) != 0:
            raise MapError("PDE transformation needs tbar = T(t) and xbar = X(t, x)")
    F = localize(check_class_member(F, table), table, m.chart, strict=True)

    back = dict(zip((t, x, u), m.inverse))
    old_t, old_x, old_u = m.inverse
    p = normalize(sp.diff(x_bar, x).xreplace(back), table)
    q = normalize(sp.diff(x_bar, t).xreplace(back), table)
    r = normalize(sp.diff(t_bar, t).xreplace(back), table)

    def d_x(e):
        return p * total_diff(e, "x", table)

    def d_t(e):
        return r * total_diff(e, "t", table) + q * total_diff(e, "x", table)

    u_x_old = d_x(old_u)
    equation = (
        d_t(old_u)
        - d_x(u_x_old)
        - F.xreplace({t: old_t, x: old_x, u: old_u, u_x: u_x_old})
    )
    form = _class_form(equation, "u", table, m.chart, options)
    logger.debug("transformed %s by %s into %s", F, m.text, form.rhs)
    return form.rhs


def dependent_substitution(
    phi,
    table: SymbolTable,
    chart: Chart = EMPTY_CHART,
    options: ZeroTestOptions = DEFAULT_OPTIONS,
    text: str = "",
) -> DependentSubstitution:
    """
    Build ``u = phi(t, x, v)``.

    Raises
    ------
    MapError
        If ``phi`` mentions ``u`` or derivatives of ``v``, or if ``phi_v``
        vanishes.
    """
    phi = lower_text(phi, table) if isinstance(phi, str) else sp.sympify(phi)
    phi = normalize(localize(phi, table, chart, strict=True), table)
    v = table.jet("v")
    for symbol in phi.free_symbols:
        jet = table.jet_of(symbol)
        if jet is not None and (jet.family != "v" or jet.order > 0):
            raise MapError(f"substitution u = {phi} may only depend on t, x and v")
    if is_zero(sp.diff(phi, v), table, chart, options):
        raise MapError(f"substitution u = {phi} is not invertible in v")
    return DependentSubstitution(phi, chart, table, text or f"u = {phi}")


def parse_substitution(
    text: str,
    table: SymbolTable,
    chart: Chart = EMPTY_CHART,
    options: ZeroTestOptions = DEFAULT_OPTIONS,
) -> DependentSubstitution:
    """Parse ``"u = -ln(abs(v))"``."""
    left, equals, right = text.partition("=")
    if not equals or left.strip() != "u":
        raise MapError(f"substitution must read 'u = phi(t, x, v)'. Got '{text.strip()}'")
    return dependent_substitution(right, table, chart, options, text.strip())


def substitute_dependent(
    s: DependentSubstitution, F: sp.Expr, options: ZeroTestOptions = DEFAULT_OPTIONS
) -> ClassForm:
    """
    Rewrite ``u_t = u_xx + F`` for the new dependent variable ``v``.

    The transformed equation is ``phi_v (v_t - v_xx - G) = 0``; ``G`` and
    the factor ``phi_v`` are returned.

    Raises
    ------
    ClassViolation
        If the result is not of the form ``v_t = v_xx + G(t, x, v, v_x)``.
    """
    table = s.table
    u = table.jet("u")
    u_x = table.jet("u", 0, 1)
    F = localize(check_class_member(F, table), table, s.chart, strict=True)
    u_x_new = total_diff(s.phi, "x", table)
    equation = (
        total_diff(s.phi, "t", table)
        - total_diff(u_x_new, "x", table)
        - F.xreplace({u: s.phi, u_x: u_x_new})
    )
    form = _class_form(equation, "v", table, s.chart, options)
    logger.debug("substituted %s into %s: %s", s.text, F, form.rhs)
    return form


def _arbitrary_element(table: SymbolTable) -> sp.Expr:
    return generic_atom(table, "F", ("t", "x", "u", "u_x"))


def verify_class_preservation(
    m: EquivalenceMap, F=None, options: ZeroTestOptions = DEFAULT_OPTIONS
) -> ClassPreservation:
    """
    Check that ``m`` maps the class onto itself.

    ``ubar_tbar - ubar_xbarxbar`` is computed by the chain rule in the old
    coordinates, with ``u_t`` and ``u_tx`` eliminated through
    ``u_t = u_xx + F``. The map preserves the class iff no jet of order two
    or more survives.

    Parameters
    ----------
    m : EquivalenceMap
        Map to check, usually abstract.
    F : sympy.Expr, optional
        Right-hand side. Default is the atom ``F(t, x, u, u_x)``.
    options : ZeroTestOptions, optional
        Zero-test seed and sample count.

    Raises
    ------
    MapError
        If the change of independent variables is singular.
    """
    table = m.table.copy()
    F = _arbitrary_element(table) if F is None else sp.sympify(F)
    u_t, u_xx, u_tx = table.jet("u", 1, 0), table.jet("u", 0, 2), table.jet("u", 1, 1)
    t_bar, x_bar, u_bar = m.forward

    def d(e, direction):
        return total_diff(e, direction, table, max_order=2)

    t_t, t_x = d(t_bar, "t"), d(t_bar, "x")
    x_t, x_x = d(x_bar, "t"), d(x_bar, "x")
    jacobian = normalize(t_t * x_x - x_t * t_x, table)
    if jacobian == 0:
        raise MapError(f"map '{m.text}' is singular")

    def d_xbar(e):
        return (t_t * d(e, "x") - t_x * d(e, "t")) / jacobian

    def d_tbar(e):
        return (x_x * d(e, "t") - x_t * d(e, "x")) / jacobian

    g_bar = d_tbar(u_bar) - d_xbar(d_xbar(u_bar))
    evolution = u_xx + F
    g_bar = sp.expand(g_bar).xreplace(
        {u_tx: total_diff(evolution, "x", table, max_order=3), u_t: evolution}
    )
    g_bar = normalize(g_bar, table)

    higher = sorted(
        (s for s in g_bar.free_symbols if (jet := table.jet_of(s)) is not None and jet.order >= 2),
        key=lambda s: s.name,
    )
    offending = tuple(
        s.name for s in higher if not is_zero(sp.diff(g_bar, s), table, m.chart, options)
    )
    if not offending and higher:
        g_bar = normalize(g_bar.xreplace({s: 0 for s in higher}), table)
    logger.debug("class preservation of %s: offending %s", m.text, offending)
    return ClassPreservation(not offending, g_bar, offending)


def equivalence_operator(table: SymbolTable, theta=None, chi=None, psi=None) -> EquivalenceGenerator:
    """
    Generator of the equivalence group with its action on ``F``.

    The coefficient of ``d_F`` is ``phi^t - phi^xx`` of the second
    prolongation restricted to ``u_t = u_xx + F``; the ``u_xx`` terms must
    cancel. Missing arguments default to the atoms ``theta(t)``,
    ``chi(t)`` and ``psi(t, x, u)``.

    Raises
    ------
    ClassViolation
        If ``theta`` or ``chi`` depend on anything but ``t``.
    KernelInconsistency
        If the coefficient of ``u_xx`` does not cancel.
    """
    table = table.copy()
    t, x, u = table.coordinates()
    theta = generic_atom(table, "theta", ("t",)) if theta is None else sp.sympify(theta)
    chi = generic_atom(table, "chi", ("t",)) if chi is None else sp.sympify(chi)
    psi = generic_atom(table, "psi", ("t", "x", "u")) if psi is None else sp.sympify(psi)
    for name, value in (("theta", theta), ("chi", chi)):
        if normalize(sp.diff(value, x), table) != 0 or normalize(sp.diff(value, u), table) != 0:
            raise ClassViolation(f"{name} must depend on t only. Got {value}")

    generator = VectorField(theta, sp.diff(theta, t) * x / 2 + chi, psi)
    prolongation = prolong2(generator, table)
    F = _arbitrary_element(table)
    u_t, u_tx, u_xx = table.jet("u", 1, 0), table.jet("u", 1, 1), table.jet("u", 0, 2)
    evolution = u_xx + F
    eta_F = sp.expand(prolongation.phi_t - prolongation.phi_xx).xreplace(
        {u_tx: total_diff(evolution, "x", table, max_order=3), u_t: evolution}
    )
    eta_F = normalize(eta_F, table)
    if sp.diff(eta_F, u_xx) != 0:
        if not is_zero(sp.diff(eta_F, u_xx), table):
            raise KernelInconsistency(f"u_xx survives in the F component: {eta_F}")
        eta_F = normalize(eta_F.xreplace({u_xx: 0}), table)
    return EquivalenceGenerator(generator, eta_F)
