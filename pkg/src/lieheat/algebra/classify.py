"""
Identification of Lie algebras of dimension at most five.

Dimensions up to three are identified exactly from invariants. In
dimensions four and five a central direction outside the derived algebra is
split off first; the remaining indecomposable four-dimensional algebras are
identified from the action of a complement of the nilradical on it, and
five-dimensional ones by comparing invariant fingerprints with the registry,
which may leave several candidates.
"""

import functools
import logging
import re
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from lieheat.algebra.invariants import (
    bracket_space,
    center,
    derived_algebra,
    derived_series,
    killing_form,
    lower_central_series,
    nilradical,
    span,
)
from lieheat.algebra.registry import canonical_name, records
from lieheat.algebra.structure import StructureConstants
from lieheat.utils import DimensionError, LieHeatError, ParameterError

logger = logging.getLogger(__name__)

MAX_DIM = 5
_LABEL = re.compile(r"^\s*([^()]+?)\s*(?:\((.*)\))?\s*$")


@dataclass(frozen=True)
class Label:
    """
    Name of an algebra with the parameters of its family.

    Attributes
    ----------
    name : str
        Canonical name, e.g. ``A_{3.9}`` or ``A_{3.3}+A_1``.
    params : tuple of (str, sympy.Expr)
        Normalized family parameters.
    """

    name: str
    params: tuple = ()

    def __str__(self) -> str:
        if not self.params:
            return self.name
        inner = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name}({inner})"

    @classmethod
    def parse(cls, text: str, values: dict | None = None) -> "Label":
        """Parse ``"A_{3.9}(q=1/3)"``; parameter values may use names from ``values``."""
        match = _LABEL.match(text)
        if match is None:
            raise LieHeatError(f"can not read algebra label '{text}'")
        params = []
        locals_ = {k: sp.Rational(Fraction(str(v))) for k, v in (values or {}).items()}
        for item in filter(None, (p.strip() for p in (match.group(2) or "").split(","))):
            key, _, value = item.partition("=")
            params.append((key.strip(), sp.nsimplify(sp.sympify(value, locals=locals_))))
        return cls(canonical_name(match.group(1)), tuple(params))

    def matches(self, other: "Label") -> bool:
        if canonical_name(self.name) != canonical_name(other.name):
            return False
        mine, theirs = dict(self.params), dict(other.params)
        if set(mine) != set(theirs):
            return not mine or not theirs
        return all(sp.simplify(mine[k] - theirs[k]) == 0 for k in mine)


@dataclass(frozen=True)
class AlgebraFingerprint:
    """
    Invariants of an algebra and the label they determine.

    Attributes
    ----------
    dim : int
        Dimension.
    derived_series, lower_central_series : tuple of int
        Dimensions of the series.
    center_dim : int
        Dimension of the center.
    nilradical_dim : int
        Dimension of the nilradical.
    killing_rank : int
        Rank of the Killing form.
    killing_signature : tuple of int
        Positive and negative inertia of the Killing form.
    label : Label or None
        Identified algebra, None if unidentified or ambiguous.
    candidates : tuple of str
        Registry names consistent with the invariants when ``label`` is None.
    """

    dim: int
    derived_series: tuple
    lower_central_series: tuple
    center_dim: int
    nilradical_dim: int
    killing_rank: int
    killing_signature: tuple
    label: Label | None = None
    candidates: tuple = ()

    @property
    def invariants(self) -> tuple:
        return (
            self.derived_series,
            self.lower_central_series,
            self.center_dim,
            self.nilradical_dim,
            self.killing_rank,
            self.killing_signature,
        )

    @property
    def ambiguous(self) -> bool:
        return self.label is None and len(self.candidates) > 1

    def describe(self) -> str:
        if self.label is not None:
            text = str(self.label)
        elif self.candidates:
            text = f"ambiguous among {{{', '.join(self.candidates)}}}"
        else:
            text = "unidentified"
        pos, neg = self.killing_signature
        return f"{text}; Killing signature ({pos},{neg})"

    def consistent_with(self, expected: Label) -> bool:
        if self.label is not None:
            return self.label.matches(expected)
        return canonical_name(expected.name) in {canonical_name(c) for c in self.candidates}


def _coordinates_in(subspace: list, vector: sp.Matrix) -> sp.Matrix:
    M = sp.Matrix.hstack(*subspace)
    solution = (M.T * M).inv() * M.T * vector
    return solution.applyfunc(sp.cancel)


def restrict(c: StructureConstants, subspace: list) -> StructureConstants:
    """Structure constants of a subalgebra in the given basis."""
    m = len(subspace)
    brackets = {}
    for a in range(m):
        for b in range(a + 1, m):
            brackets[(a, b)] = list(_coordinates_in(subspace, c.bracket(subspace[a], subspace[b])))
    return StructureConstants.from_brackets(m, brackets)


def _action_on(c: StructureConstants, subspace: list, element: sp.Matrix) -> sp.Matrix:
    """Matrix of ``n -> [n, element]`` on ``subspace``."""
    columns = [_coordinates_in(subspace, c.bracket(n, element)) for n in subspace]
    return sp.Matrix.hstack(*columns)


def _complement_vector(c: StructureConstants, subspace: list) -> sp.Matrix:
    for i in range(c.dim):
        e = c.basis_vector(i)
        if len(span(subspace + [e], c.dim)) > len(subspace):
            return e
    raise LieHeatError("subspace has no complement")


def _eigen_list(M: sp.Matrix) -> list:
    values = []
    for value, multiplicity in M.eigenvals(multiple=False).items():
        values.extend([sp.nsimplify(sp.simplify(value))] * multiplicity)
    return values


def _geometric(M: sp.Matrix, value) -> int:
    return M.shape[0] - (M - value * sp.eye(M.shape[0])).rank(simplify=True)


def _classify_dim3(c: StructureConstants) -> Label | None:
    derived = derived_algebra(c)
    if not derived:
        return Label("A_{3.1}")
    if len(derived) == 3:
        positive, negative = killing_form(c).signature
        return Label("A_{3.4}") if positive == 0 else Label("A_{3.3}")
    if len(derived) == 1:
        central = len(span(derived + center(c), c.dim)) == len(center(c))
        return Label("A_{3.5}") if central else Label("A_{3.2}")
    M = _action_on(c, derived, _complement_vector(c, derived))
    trace, det = M.trace(), M.det()
    discriminant = sp.simplify(trace**2 - 4 * det)
    if discriminant == 0:
        half = trace / 2
        if (M - half * sp.eye(2)).is_zero_matrix:
            return Label("A_{3.7}")
        return Label("A_{3.6}")
    if discriminant > 0:
        first = (trace + sp.sqrt(discriminant)) / 2
        second = (trace - sp.sqrt(discriminant)) / 2
        ratio = sp.nsimplify(sp.simplify(second / first))
        if abs(ratio) > 1:
            ratio = sp.nsimplify(sp.simplify(1 / ratio))
        if ratio == -1:
            return Label("A_{3.8}")
        return Label("A_{3.9}", (("q", ratio),))
    real = trace / 2
    imaginary = sp.sqrt(-discriminant) / 2
    if real == 0:
        return Label("A_{3.10}")
    return Label("A_{3.11}", (("q", sp.nsimplify(sp.simplify(abs(real / imaginary)))),))


def _classify_abelian_nilradical(M: sp.Matrix) -> Label | None:
    values = _eigen_list(M)
    if any(not v.is_real for v in values):
        real = next(v for v in values if v.is_real)
        pair = next(v for v in values if not v.is_real)
        a, b = sp.re(pair), abs(sp.im(pair))
        q, p = real / b, a / b
        if p < 0 or (p == 0 and q < 0):
            q, p = -q, -p
        return Label("A_{4.6}", (("q", sp.nsimplify(q)), ("p", sp.nsimplify(p))))
    distinct = sorted(set(values), key=sp.default_sort_key)
    if len(distinct) == 1:
        value = distinct[0]
        geometric = _geometric(M, value)
        if geometric == 1:
            return Label("A_{4.4}")
        if geometric == 2:
            return Label("A_{4.2}", (("q", sp.Integer(1)),))
    defective = [v for v in distinct if _geometric(M, v) < values.count(v)]
    if defective:
        jordan = defective[0]
        other = next(v for v in distinct if v != jordan)
        if jordan == 0:
            return Label("A_{4.3}")
        return Label("A_{4.2}", (("q", sp.nsimplify(other / jordan)),))
    largest = max(abs(v) for v in values)
    options = []
    for scale in {v for v in values if abs(v) == largest}:
        rest = list(values)
        rest.remove(scale)
        q, p = sorted((sp.nsimplify(v / scale) for v in rest), reverse=True)
        options.append((q, p))
    q, p = max(options)
    return Label("A_{4.5}", (("q", q), ("p", p)))


def _classify_heisenberg_nilradical(M: sp.Matrix) -> Label | None:
    values = _eigen_list(M)
    central = sp.nsimplify(M.trace() / 2)
    rest = list(values)
    if central in rest:
        rest.remove(central)
    if len(rest) != 2:
        return None
    a, b = rest
    if not (a.is_real and b.is_real):
        q = sp.nsimplify(abs(sp.re(a) / sp.im(a)))
        return Label("A_{4.9}", (("q", q),))
    if a == b and _geometric(M, a) < 2 + (1 if central == a else 0):
        return Label("A_{4.7}") if a != 0 else None
    q = b / a if a != 0 else sp.Integer(0)
    if abs(q) > 1:
        q = a / b
    return Label("A_{4.8}", (("q", sp.nsimplify(q)),))


def _classify_dim4(c: StructureConstants) -> Label | None:
    nil = nilradical(c)
    if len(nil) == 4:
        return Label("A_{4.1}")
    if len(nil) == 2:
        positive, negative = killing_form(c).signature
        return Label("A_{2.2}+A_{2.2}") if negative == 0 else Label("A_{4.10}")
    if len(nil) != 3:
        return None
    M = _action_on(c, nil, _complement_vector(c, nil))
    if bracket_space(c, nil, nil):
        return _classify_heisenberg_nilradical(M)
    return _classify_abelian_nilradical(M)


def _split_central(c: StructureConstants):
    derived = derived_algebra(c)
    for z in center(c):
        if len(span(derived + [z], c.dim)) == len(derived):
            continue
        complement = list(derived)
        for i in range(c.dim):
            if len(complement) == c.dim - 1:
                break
            trial = span(complement + [c.basis_vector(i)], c.dim)
            if len(trial) > len(complement) and len(span(trial + [z], c.dim)) > len(trial):
                complement = trial
        if len(complement) == c.dim - 1:
            return restrict(c, complement)
    return None


@functools.cache
def _registry_fingerprints(dim: int) -> tuple:
    found = []
    for record in records(dim):
        found.append((record.name, _invariants(record.instance())))
    return tuple(found)


def _invariants(c: StructureConstants) -> tuple:
    form = killing_form(c)
    return (
        tuple(derived_series(c)),
        tuple(lower_central_series(c)),
        len(center(c)),
        len(nilradical(c)),
        form.rank,
        form.signature,
    )


def _identify(c: StructureConstants) -> tuple:
    if c.dim == 1:
        return Label("A_1"), ()
    if c.dim == 2:
        return (Label("A_{2.2}") if derived_algebra(c) else Label("A_{2.1}")), ()
    if c.dim == 3:
        return _classify_dim3(c), ()
    part = _split_central(c)
    if part is not None:
        label, candidates = _identify(part)
        if label is not None:
            return Label(canonical_name(f"{label.name}+A_1"), label.params), ()
        return None, tuple(f"{name}+A_1" for name in candidates)
    if c.dim == 4:
        return _classify_dim4(c), ()
    invariants = _invariants(c)
    matching = tuple(name for name, inv in _registry_fingerprints(c.dim) if inv == invariants)
    if len(matching) == 1:
        return Label(matching[0]), ()
    return None, matching


def _instantiate(c: StructureConstants, values: dict | None) -> StructureConstants:
    free = c.free_params
    if not free:
        return c
    values = values or {}
    missing = sorted(s.name for s in free if s.name not in values)
    if missing:
        raise ParameterError(
            f"structure constants contain parameters {', '.join(missing)}; give generic values"
        )
    return c.subs({s: sp.Rational(Fraction(str(values[s.name]))) for s in free})


def classify(c: StructureConstants, generic_values: dict | None = None) -> AlgebraFingerprint:
    """
    Identify the algebra with structure constants ``c``.

    Parameters
    ----------
    c : StructureConstants
        Algebra of dimension one to five.
    generic_values : dict, optional
        Values for parameters left in ``c``, by name.

    Returns
    -------
    AlgebraFingerprint
        Invariants with the label, or the candidate list when the invariants
        do not single out one registry entry.

    Raises
    ------
    DimensionError
        If the dimension is above five.
    ParameterError
        If ``c`` has parameters without generic values.
    """
    if not 1 <= c.dim <= MAX_DIM:
        raise DimensionError(f"classification supports dimensions 1 to {MAX_DIM}. Got {c.dim}.")
    c = _instantiate(c, generic_values)
    label, candidates = _identify(c)
    form = killing_form(c)
    fingerprint = AlgebraFingerprint(
        c.dim,
        tuple(derived_series(c)),
        tuple(lower_central_series(c)),
        len(center(c)),
        len(nilradical(c)),
        form.rank,
        form.signature,
        label,
        candidates,
    )
    logger.debug("classified %d-dimensional algebra: %s", c.dim, fingerprint.describe())
    return fingerprint
