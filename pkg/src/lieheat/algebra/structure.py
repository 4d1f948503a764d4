"""
Structure constants of finite-dimensional real Lie algebras.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field

import sympy as sp

from lieheat.expr import (
    DEFAULT_OPTIONS,
    EMPTY_CHART,
    Chart,
    SymbolTable,
    is_zero,
    localize,
    normalize,
)
from lieheat.fields import commutator, linear_combination
from lieheat.utils import LieHeatError, NotClosedError

logger = logging.getLogger(__name__)

_RELATION = re.compile(r"^\s*\[\s*[eQ](\d+)\s*,\s*[eQ](\d+)\s*\]\s*=\s*(.+?)\s*$")


@dataclass(frozen=True)
class StructureConstants:
    """
    Tensor ``c[i][j][k]`` with ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

    Attributes
    ----------
    dim : int
        Dimension of the algebra.
    tensor : tuple
        Nested tuples of sympy expressions, antisymmetric in ``i, j``.
    params : tuple of sympy.Symbol
        Free parameters the entries may contain.
    checked : bool
        Whether antisymmetry and the Jacobi identity were verified on
        construction.
    """

    dim: int
    tensor: tuple
    params: tuple = ()
    checked: bool = field(default=True, compare=False)

    def __post_init__(self):
        tensor = tuple(
            tuple(tuple(sp.sympify(c) for c in row) for row in plane) for plane in self.tensor
        )
        object.__setattr__(self, "tensor", tensor)
        if len(tensor) != self.dim or any(
            len(row) != self.dim or any(len(c) != self.dim for c in row) for row in tensor
        ):
            raise LieHeatError(f"structure tensor is not {self.dim}x{self.dim}x{self.dim}")
        for i, j in itertools.combinations_with_replacement(range(self.dim), 2):
            for k in range(self.dim):
                if sp.cancel(tensor[i][j][k] + tensor[j][i][k]) != 0:
                    raise LieHeatError(f"structure tensor is not antisymmetric at ({i}, {j}, {k})")
        if self.checked and not jacobi_check(self):
            raise LieHeatError("structure tensor violates the Jacobi identity")

    @classmethod
    def zero(cls, dim: int) -> "StructureConstants":
        return cls(dim, tuple(tuple((0,) * dim for _ in range(dim)) for _ in range(dim)))

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, params=(), checked: bool = True):
        """Build from ``{(i, j): [c_1, ..., c_n]}`` with 0-based indices."""
        tensor = [[[sp.Integer(0)] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coefficients in brackets.items():
            for k, c in enumerate(coefficients):
                tensor[i][j][k] = sp.sympify(c)
                tensor[j][i][k] = -sp.sympify(c)
        return cls(dim, tuple(map(tuple, (map(tuple, plane) for plane in tensor))), tuple(params), checked)

    @classmethod
    def from_relations(cls, dim: int, text: str, params=(), checked: bool = True):
        """
        Build from relations such as ``"[e1, e2] = e2; [e1, e3] = q*e1 - e3"``.

        Basis elements may be named ``e1..en`` or ``Q1..Qn``; unlisted
        brackets are zero. Parameters are given by name.
        """
        symbols = {name: sp.Symbol(name, real=True) for name in params}
        basis = [sp.Symbol(f"__e{k}") for k in range(1, dim + 1)]
        brackets = {}
        for raw in re.split(r"[;\n]", text):
            if not raw.strip():
                continue
            match = _RELATION.match(raw)
            if match is None:
                raise LieHeatError(f"can not read commutation relation '{raw.strip()}'")
            i, j = int(match.group(1)) - 1, int(match.group(2)) - 1
            if not (0 <= i < dim and 0 <= j < dim) or i == j:
                raise LieHeatError(f"invalid bracket indices in '{raw.strip()}'")
            rhs = re.sub(r"\b[eQ](\d+)\b", r"__e\1", match.group(3))
            value = sp.sympify(rhs, locals={**symbols, **{str(b): b for b in basis}})
            value = sp.expand(value)
            coefficients = [value.coeff(b) for b in basis]
            if sp.expand(value - sum(c * b for c, b in zip(coefficients, basis))) != 0:
                raise LieHeatError(f"right-hand side of '{raw.strip()}' is not linear in the basis")
            brackets[(i, j)] = coefficients
        return cls.from_brackets(dim, brackets, tuple(symbols.values()), checked)

    @property
    def free_params(self) -> set:
        found = set()
        for plane in self.tensor:
            for row in plane:
                for c in row:
                    found |= c.free_symbols
        return found

    def bracket(self, x, y) -> sp.Matrix:
        """Bracket of coordinate vectors ``x`` and ``y``."""
        x, y = sp.Matrix(x), sp.Matrix(y)
        result = sp.zeros(self.dim, 1)
        for i in range(self.dim):
            if x[i] == 0:
                continue
            for j in range(self.dim):
                if y[j] == 0:
                    continue
                for k in range(self.dim):
                    result[k] += x[i] * y[j] * self.tensor[i][j][k]
        return result.applyfunc(sp.cancel)

    def adjoint(self, x) -> sp.Matrix:
        """Matrix of ``ad x``, acting on coordinate columns."""
        x = sp.Matrix(x)
        matrix = sp.zeros(self.dim, self.dim)
        for j in range(self.dim):
            for k in range(self.dim):
                matrix[k, j] = sp.cancel(sum(x[i] * self.tensor[i][j][k] for i in range(self.dim)))
        return matrix

    def basis_vector(self, i: int) -> sp.Matrix:
        v = sp.zeros(self.dim, 1)
        v[i] = 1
        return v

    def subs(self, values: dict) -> "StructureConstants":
        """Instantiate parameters, given by symbol or name."""
        mapping = {}
        for key, value in values.items():
            if isinstance(key, str):
                matches = [s for s in self.free_params if s.name == key]
                mapping.update({s: sp.sympify(value) for s in matches})
            else:
                mapping[key] = sp.sympify(value)
        tensor = tuple(
            tuple(tuple(sp.cancel(c.xreplace(mapping)) for c in row) for row in plane)
            for plane in self.tensor
        )
        params = tuple(p for p in self.params if p not in mapping)
        return StructureConstants(self.dim, tensor, params, self.checked)

    def change_basis(self, rows) -> "StructureConstants":
        """Structure constants in the basis ``f_a = sum_i rows[a][i] e_i``."""
        P = sp.Matrix(rows)
        if P.shape != (self.dim, self.dim) or P.det() == 0:
            raise LieHeatError("change of basis must be an invertible square matrix")
        inverse = P.T.inv()
        brackets = {}
        for a, b in itertools.combinations(range(self.dim), 2):
            value = self.bracket(P.row(a).T, P.row(b).T)
            brackets[(a, b)] = list((inverse * value).applyfunc(sp.cancel))
        return StructureConstants.from_brackets(self.dim, brackets, self.params, self.checked)

    def relations(self, name: str = "e") -> str:
        """Nonzero brackets as text, the format read by `from_relations`."""
        parts = []
        for i, j in itertools.combinations(range(self.dim), 2):
            terms = [
                (c, k) for k, c in enumerate(self.tensor[i][j]) if c != 0
            ]
            if not terms:
                continue
            value = sum(c * sp.Symbol(f"{name}{k + 1}") for c, k in terms)
            parts.append(f"[{name}{i + 1}, {name}{j + 1}] = {value}")
        return "; ".join(parts)


def jacobi_check(c: StructureConstants) -> bool:
    """Whether ``[[a,b],c] + [[b,c],a] + [[c,a],b] = 0`` for all basis triples."""
    n = c.dim
    for i, j, k in itertools.combinations(range(n), 3):
        for m in range(n):
            total = 0
            for (a, b, d) in ((i, j, k), (j, k, i), (k, i, j)):
                total += sum(c.tensor[a][b][l] * c.tensor[l][d][m] for l in range(n))
            if sp.cancel(total) != 0:
                return False
    return True


def direct_sum(*algebras: StructureConstants) -> StructureConstants:
    """Direct sum, basis concatenated in order."""
    dim = sum(a.dim for a in algebras)
    brackets = {}
    offset = 0
    for algebra in algebras:
        for i, j in itertools.combinations(range(algebra.dim), 2):
            coefficients = [0] * dim
            for k in range(algebra.dim):
                coefficients[offset + k] = algebra.tensor[i][j][k]
            brackets[(offset + i, offset + j)] = coefficients
        offset += algebra.dim
    params = tuple(p for a in algebras for p in a.params)
    return StructureConstants.from_brackets(dim, brackets, params)


def _coordinate_free_parts(expr: sp.Expr, coordinates: set) -> dict:
    parts = {}
    for term in sp.Add.make_args(sp.expand(expr)):
        coefficient, dependent = term.as_independent(*coordinates, as_Add=False)
        parts[dependent] = parts.get(dependent, 0) + coefficient
    return parts


def _coordinates(table: SymbolTable) -> set:
    coordinates = {table.independent["t"], table.independent["x"]} | set(table.jets.values())
    coordinates |= set(table.symbols.values())
    for spec in table.atoms.values():
        coordinates |= set(spec.templates)
    return coordinates


def span_coefficients(
    target, basis, table: SymbolTable, chart: Chart = EMPTY_CHART, options=DEFAULT_OPTIONS
) -> list | None:
    """
    Constant coefficients writing ``target`` as a combination of ``basis``.

    Returns None if ``target`` is not in the constant-coefficient span.
    """
    unknowns = sp.symbols(f"__c1:{len(basis) + 1}")
    coordinates = _coordinates(table)
    combination = linear_combination(unknowns, basis)
    equations = []
    for lhs, rhs in zip(combination.components, target.components):
        numerator = sp.fraction(sp.together(normalize(lhs - rhs, table)))[0]
        equations.extend(
            sp.expand(eq)
            for eq in _coordinate_free_parts(numerator, coordinates).values()
            if sp.expand(eq) != 0
        )
    solution = sp.solve(equations, unknowns, dict=True) if equations else [{}]
    if not solution:
        return None
    values = [sp.cancel(solution[0].get(u, 0)).xreplace({v: 0 for v in unknowns}) for u in unknowns]
    check = linear_combination(values, basis) - target
    if any(not is_zero(c, table, chart, options) for c in check.components):
        return None
    return values


def structure_constants(
    basis, table: SymbolTable, chart: Chart = EMPTY_CHART, options=DEFAULT_OPTIONS
) -> StructureConstants:
    """
    Structure constants of the span of the vector fields ``basis``.

    Every commutator is written as a linear combination of the basis with
    constant coefficients (which may contain declared parameters) by
    matching coordinate-dependent parts, and the decomposition is verified.

    Raises
    ------
    NotClosedError
        If some commutator is not a constant-coefficient combination of the
        basis. ``pair`` holds the 1-based indices.
    """
    basis = [q.map(lambda c: localize(c, table, chart, strict=True)) for q in basis]
    n = len(basis)
    brackets = {}
    for i, j in itertools.combinations(range(n), 2):
        target = commutator(basis[i], basis[j], table)
        values = span_coefficients(target, basis, table, chart, options)
        if values is None:
            raise NotClosedError(
                f"commutator [Q{i + 1}, Q{j + 1}] is not in the span of the basis",
                (i + 1, j + 1),
                target,
            )
        brackets[(i, j)] = values
    used = set().union(*(sp.sympify(v).free_symbols for vs in brackets.values() for v in vs))
    params = tuple(sorted((p for p in table.param_symbols if p in used), key=lambda s: s.name))
    result = StructureConstants.from_brackets(n, brackets, params, checked=False)
    if not jacobi_check(result):
        raise NotClosedError("computed structure constants violate the Jacobi identity")
    return result
