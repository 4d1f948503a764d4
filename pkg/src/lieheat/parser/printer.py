"""
Printing of expressions and fields in the input syntax.

Printed text parses back to an expression with the same normal form.
"""

import sympy as sp
from sympy.printing.precedence import PRECEDENCE
from sympy.printing.str import StrPrinter

from lieheat.expr.atoms import AtomApplication


class LieHeatPrinter(StrPrinter):
    """
    `StrPrinter` speaking the expression language of the parser.

    Parameters
    ----------
    table : SymbolTable or None, optional
        Used to name the derivative variables of atoms and to decide when
        the prime shorthand ``a'(t)`` applies.
    """

    def __init__(self, table=None, settings=None):
        super().__init__(settings or {"order": "lex"})
        self.table = table

    def _print_Pow(self, expr, rational=False):
        base, exponent = expr.as_base_exp()
        if exponent is sp.S.Half:
            return f"sqrt({self._print(base)})"
        if exponent == -1:
            return f"1/{self.parenthesize(base, PRECEDENCE['Mul'], strict=True)}"
        if exponent.is_Integer and exponent.is_positive:
            shown = self._print(exponent)
        else:
            shown = f"({self._print(exponent)})"
        return f"{self.parenthesize(base, PRECEDENCE['Pow'], strict=True)}^{shown}"

    def _print_Rational(self, expr):
        if expr.q == 1:
            return str(expr.p)
        return f"{expr.p}/{expr.q}"

    def _print_Exp1(self, expr):
        return "exp(1)"

    def _print_exp(self, expr):
        return f"exp({self._print(expr.args[0])})"

    def _print_log(self, expr):
        return f"ln({self._print(expr.args[0])})"

    def _print_atan(self, expr):
        return f"arctan({self._print(expr.args[0])})"

    def _print_Abs(self, expr):
        return f"abs({self._print(expr.args[0])})"

    def _print_Pi(self, expr):
        return "pi"

    def _templates(self, expr) -> list:
        if self.table is not None and expr.atom_name in self.table.atoms:
            return [s.name for s in self.table.atom(expr.atom_name).templates]
        return [f"z{i + 1}" for i in range(len(expr.orders))]

    def _print_Function(self, expr):
        # the printer dispatch skips base classes named unlike the instance
        if isinstance(expr, AtomApplication):
            return self._print_atom(expr)
        return super()._print_Function(expr)

    def _print_atom(self, expr):
        args = ", ".join(self._print(a) for a in expr.args)
        orders = expr.orders
        if not any(orders):
            return f"{expr.atom_name}({args})"
        templates = self._templates(expr)
        if templates == ["t"] and orders[0] <= 2:
            return f"{expr.atom_name}{chr(39) * orders[0]}({args})"
        pairs = ", ".join(f"{name}, {count}" for name, count in zip(templates, orders) if count)
        return f"D[{expr.atom_name}, {pairs}]({args})"


def print_expr(e: sp.Expr, table=None) -> str:
    """Print ``e`` in the parser syntax."""
    return LieHeatPrinter(table).doprint(sp.sympify(e))


def print_field(field, table=None) -> str:
    """Print a vector field as ``"tau*dt + xi*dx + eta*du"``, omitting zeros."""
    printer = LieHeatPrinter(table)
    terms = []
    for coefficient, marker in zip(field.components, ("dt", "dx", "du")):
        if coefficient == 0:
            continue
        negative = coefficient.could_extract_minus_sign()
        magnitude = -coefficient if negative else coefficient
        if magnitude == 1:
            body = marker
        else:
            body = f"{printer.parenthesize(magnitude, PRECEDENCE['Mul'])}*{marker}"
        terms.append((negative, body))
    if not terms:
        return "0"
    negative, body = terms[0]
    text = f"-{body}" if negative else body
    for negative, body in terms[1:]:
        text += f" - {body}" if negative else f" + {body}"
    return text
