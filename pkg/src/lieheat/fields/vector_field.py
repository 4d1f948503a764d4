"""
Point vector fields on ``(t, x, u)`` and their commutator.
"""

from dataclasses import dataclass

import sympy as sp

from lieheat.expr import DEFAULT_OPTIONS, SymbolTable, is_zero, normalize
from lieheat.utils import PointFieldViolation


@dataclass(frozen=True)
class VectorField:
    """
    Point vector field ``tau*d_t + xi*d_x + eta*d_u``.

    Attributes
    ----------
    tau : sympy.Expr
        Coefficient of ``d_t``.
    xi : sympy.Expr
        Coefficient of ``d_x``.
    eta : sympy.Expr
        Coefficient of ``d_u``.
    """

    tau: sp.Expr = sp.Integer(0)
    xi: sp.Expr = sp.Integer(0)
    eta: sp.Expr = sp.Integer(0)

    def __post_init__(self):
        for name in ("tau", "xi", "eta"):
            object.__setattr__(self, name, sp.sympify(getattr(self, name)))

    @property
    def components(self) -> tuple:
        return self.tau, self.xi, self.eta

    def check_point(self, table: SymbolTable) -> "VectorField":
        """Raise `PointFieldViolation` if a coefficient depends on a derivative of u."""
        for coefficient in self.components:
            for symbol in coefficient.free_symbols:
                jet = table.jet_of(symbol)
                if jet is not None and jet.order > 0:
                    raise PointFieldViolation(
                        f"point-field violation: coefficient {coefficient} depends on {symbol}"
                    )
        return self

    def apply(self, f: sp.Expr, table: SymbolTable) -> sp.Expr:
        """Derivative of ``f(t, x, u)`` along the field."""
        t, x, u = table.coordinates()
        f = sp.sympify(f)
        return self.tau * sp.diff(f, t) + self.xi * sp.diff(f, x) + self.eta * sp.diff(f, u)

    def normalized(self, table: SymbolTable) -> "VectorField":
        return VectorField(*(normalize(c, table) for c in self.components))

    def map(self, fn) -> "VectorField":
        return VectorField(*(fn(c) for c in self.components))

    def xreplace(self, mapping: dict) -> "VectorField":
        return self.map(lambda c: c.xreplace(mapping))

    def is_zero(self, table: SymbolTable, chart=None, options=DEFAULT_OPTIONS) -> bool:
        return all(is_zero(c, table, chart, options) for c in self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(*(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(*(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "VectorField":
        return self.map(lambda c: -c)

    def __mul__(self, scalar) -> "VectorField":
        scalar = sp.sympify(scalar)
        return self.map(lambda c: scalar * c)

    __rmul__ = __mul__


ZERO_FIELD = VectorField()


def commutator(q1: VectorField, q2: VectorField, table: SymbolTable) -> VectorField:
    """
    Lie bracket ``[q1, q2]``.

    Each coefficient is ``q1(coefficient of q2) - q2(coefficient of q1)``,
    normalized.
    """
    return VectorField(
        *(
            normalize(q1.apply(c2, table) - q2.apply(c1, table), table)
            for c1, c2 in zip(q1.components, q2.components)
        )
    )


def linear_combination(coefficients, fields) -> VectorField:
    total = ZERO_FIELD
    for coefficient, field in zip(coefficients, fields):
        if coefficient != 0:
            total = total + field * coefficient
    return total
