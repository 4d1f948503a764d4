"""
Core operations of the symbolic kernel: differentiation, total derivatives,
substitution and normalization.
"""

import logging

import sympy as sp

from lieheat.expr.atoms import AtomApplication
from lieheat.expr.symbols import SymbolTable
from lieheat.utils import DeclarationError, KernelInconsistency, ProlongationOrderError

logger = logging.getLogger(__name__)

_MAX_REWRITES = 32
_MAX_NORMALIZE_ROUNDS = 8


def _as_symbol(v, table: SymbolTable) -> sp.Symbol:
    if isinstance(v, str):
        return table.lookup(v)
    if isinstance(v, sp.Symbol) and v.name in table.names() and table.lookup(v.name) == v:
        return v
    if isinstance(v, sp.Symbol) and table.jet_of(v) is not None:
        return v
    name = getattr(v, "name", str(v))
    raise DeclarationError(f"can not differentiate with respect to undeclared '{name}'", name)


def diff(e: sp.Expr, v, table: SymbolTable) -> sp.Expr:
    """
    Partial derivative of ``e`` with respect to a declared symbol.

    Derivatives of atoms come back as atom applications with raised orders.
    """
    return sp.diff(sp.sympify(e), _as_symbol(v, table))


def total_diff(e: sp.Expr, direction: str, table: SymbolTable, max_order: int = 2) -> sp.Expr:
    """
    Total derivative ``D_t`` or ``D_x`` of ``e`` on the jet space.

    ``D_d e = e_d + sum over jets J of e_J * J_d``. Jets of order ``max_order``
    that actually occur raise `ProlongationOrderError`.
    """
    if direction not in table.independent:
        raise DeclarationError(f"total derivative needs t or x. Got '{direction}'", direction)
    e = sp.sympify(e)
    result = sp.diff(e, table.independent[direction])
    for symbol in sorted(e.free_symbols, key=sp.default_sort_key):
        jet = table.jet_of(symbol)
        if jet is None:
            continue
        partial = sp.diff(e, symbol)
        if partial == 0:
            continue
        shifted = jet.shifted(direction)
        if shifted.order > max_order:
            raise ProlongationOrderError(
                f"prolongation order exceeded: D_{direction} of {symbol} needs order {shifted.order}"
            )
        result += partial * table.jet(shifted.family, shifted.t_order, shifted.x_order)
    return result


def _rebuild(e: sp.Basic, fn):
    if not e.args:
        return fn(e)
    args = tuple(_rebuild(a, fn) for a in e.args)
    if args != e.args:
        e = e.func(*args)
    return fn(e)


def apply_rules(e: sp.Expr, table: SymbolTable) -> sp.Expr:
    """Apply the rewrite rules and sign reduction of ``table`` to a fixpoint."""
    signs = table.sign_symbols
    if not table.rules and not signs:
        return e

    def step(node):
        if isinstance(node, AtomApplication):
            for rule in table.rules:
                value = rule.instantiate(node)
                if value is not None:
                    return value
        elif node.is_Pow:
            if node.base in signs and node.exp.is_Integer:
                return node.base ** (int(node.exp) % 2)
            for rule in table.rules:
                value = rule.reduce_power(node)
                if value is not None:
                    return value
        return node

    for _ in range(_MAX_REWRITES):
        rewritten = _rebuild(e, step)
        if rewritten == e:
            return e
        e = rewritten
    raise KernelInconsistency("rewrite rules do not terminate")


def _canonical_arguments(e: sp.Expr) -> sp.Expr:
    def step(node):
        if isinstance(node, (AtomApplication, sp.exp, sp.log, sp.atan)):
            args = tuple(sp.cancel(a) for a in node.args)
            if args != node.args:
                return node.func(*args)
        elif node.is_Pow and not node.exp.is_Integer:
            base, exponent = sp.cancel(node.base), sp.cancel(node.exp)
            if (base, exponent) != (node.base, node.exp):
                return sp.Pow(base, exponent)
        return node

    return _rebuild(e, step)


def prepare(e: sp.Expr, table: SymbolTable) -> sp.Expr:
    """Rules, canonical function arguments and merged exponentials, without cancelling."""
    e = apply_rules(sp.sympify(e), table)
    e = _canonical_arguments(e)
    e = sp.powsimp(e, combine="exp")
    return apply_rules(e, table)


def normalize(e: sp.Expr, table: SymbolTable) -> sp.Expr:
    """
    Canonical form of ``e`` used for structural comparison.

    Alternates rule application and rational cancellation until nothing
    changes. Two expressions with equal normal forms are equal; the converse
    does not hold, see `lieheat.expr.zero_test.is_zero`.
    """
    current = sp.sympify(e)
    for _ in range(_MAX_NORMALIZE_ROUNDS):
        following = apply_rules(sp.cancel(prepare(current, table)), table)
        if following == current:
            return current
        current = following
    logger.debug("normalize stopped before a fixpoint")
    return current


def substitute(e: sp.Expr, bindings: dict, table: SymbolTable) -> sp.Expr:
    """
    Substitute declared names and nodes in ``e``, then normalize.

    Keys of ``bindings`` may be symbol names, symbols, atom names or
    arbitrary nodes. An atom binding gives the atom as an expression in its
    template variables and also replaces every derivative of the atom.
    Symbol and node bindings are applied simultaneously.

    Raises
    ------
    DeclarationError
        If a key names nothing declared.
    """
    e = sp.sympify(e)
    atom_bindings = {}
    node_bindings = {}
    for key, value in bindings.items():
        value = sp.sympify(value)
        if isinstance(key, str):
            if key in table.atoms:
                atom_bindings[key] = value
            else:
                node_bindings[table.lookup(key)] = value
        elif isinstance(key, sp.Symbol):
            node_bindings[_as_symbol(key, table)] = value
        else:
            node_bindings[sp.sympify(key)] = value

    if atom_bindings:

        def replace_atom(node):
            if isinstance(node, AtomApplication) and node.atom_name in atom_bindings:
                spec = table.atom(node.atom_name)
                value = atom_bindings[node.atom_name]
                for var, count in zip(spec.templates, node.orders):
                    if count:
                        value = sp.diff(value, var, count)
                return value.xreplace(dict(zip(spec.templates, node.args)))
            return node

        e = _rebuild(e, replace_atom)

    if node_bindings:
        e = e.xreplace(node_bindings)
    return normalize(e, table)
