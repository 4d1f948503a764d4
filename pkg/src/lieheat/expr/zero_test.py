"""
Zero test combining normalization with seeded random evaluation.

The structural test (`normalize` returns 0) is sound but incomplete for
expressions with radicals, exponentials and logarithms. The numeric test
evaluates the prepared expression at random rational points: atom
applications, logarithms and arctangents are treated as independent
generators, exponentials sharing an exponent direction are evaluated
consistently and symbols are sampled as perfect powers so that radicals of
monomials stay rational. Numeric evaluation uses a ``numpy`` generator seeded
from the settings so that runs are reproducible.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from lieheat.expr.atoms import AtomApplication
from lieheat.expr.kernel import normalize, prepare
from lieheat.expr.symbols import Chart, SymbolTable, localize
from lieheat.utils import KernelInconsistency, LieHeatError

logger = logging.getLogger(__name__)

_Z = sp.Dummy("z")


@dataclass(frozen=True)
class ZeroTestOptions:
    """
    Parameters of the numeric zero test.

    Attributes
    ----------
    seed : int
        Seed of the random generator.
    samples : int
        Number of sample points.
    max_resample : int
        Singular sample points tolerated before giving up.
    """

    seed: int = 20240917
    samples: int = 24
    max_resample: int = 64

    @classmethod
    def from_settings(cls, settings) -> "ZeroTestOptions":
        return cls(settings.seed, settings.samples, settings.max_resample)


DEFAULT_OPTIONS = ZeroTestOptions()


@dataclass(frozen=True)
class ZeroVerdict:
    """
    Outcome of `is_zero`.

    Attributes
    ----------
    result : bool
        Whether the expression is zero.
    certificate : str
        ``structural``, ``probabilistic`` or ``witness``.
    witness : dict
        Sample point and value that proved the expression nonzero.
    """

    result: bool
    certificate: str
    witness: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.result


class _Sampler:
    def __init__(self, table: SymbolTable, chart: Chart, seed: int):
        self.table = table
        self.chart = chart
        self.rng = np.random.default_rng(seed)

    def rational(self, signed: bool = True) -> sp.Rational:
        value = sp.Rational(int(self.rng.integers(1, 50)), int(self.rng.integers(1, 12)))
        if signed and self.rng.integers(0, 2):
            return -value
        return value

    def integer(self, low: int = 2, high: int = 9) -> int:
        return int(self.rng.integers(low, high + 1))

    def param_value(self, spec, integral: bool) -> sp.Rational:
        sign = spec.sign or self.chart.sign_of(spec.symbol.name)
        for _ in range(100):
            value = (
                sp.Integer(self.integer()) * (sign or (1 if self.rng.integers(0, 2) else -1))
                if integral
                else self.rational(signed=sign == 0) * (sign or 1)
            )
            if spec.admits(value):
                return value
        raise LieHeatError(f"no admissible sample value for parameter {spec.symbol}")

    def sign(self, symbol: sp.Symbol) -> int:
        chart_sign = self.chart.sign_of(symbol.name)
        if chart_sign:
            return chart_sign
        return 1 if self.rng.integers(0, 2) else -1


def _outer_nodes(e: sp.Basic, kinds: tuple) -> list:
    found = []

    def walk(node):
        if isinstance(node, kinds):
            found.append(node)
            return
        for arg in node.args:
            walk(arg)

    walk(e)
    return sorted(set(found), key=sp.default_sort_key)


def _exponent_symbols(e: sp.Basic) -> set:
    symbols = set()
    for power in e.atoms(sp.Pow):
        symbols |= power.exp.free_symbols
    for exponential in e.atoms(sp.exp):
        symbols |= exponential.args[0].free_symbols
    return symbols


def _radical_denominator(e: sp.Basic) -> int:
    denominator = 1
    for power in e.atoms(sp.Pow):
        if power.exp.is_Rational and not power.exp.is_Integer:
            denominator = math.lcm(denominator, int(power.exp.q))
    return denominator


def _is_transcendental(e: sp.Basic) -> bool:
    if e.atoms(sp.exp, sp.log, sp.atan):
        return True
    return any(
        not power.exp.is_Integer and (not power.exp.is_Rational or power.exp.q > 1)
        for power in e.atoms(sp.Pow)
    )


def _evaluate_exponentials(e: sp.Expr, sampler: _Sampler) -> sp.Expr:
    groups = {}
    for node in _outer_nodes(e, (sp.exp,)):
        coefficient, tail = sp.factor_terms(node.args[0]).as_coeff_Mul(rational=True)
        groups.setdefault(tail, []).append((node, coefficient))
    replacements = {}
    for tail in sorted(groups, key=sp.default_sort_key):
        members = groups[tail]
        scale = math.lcm(*(int(sp.Rational(c).q) for _, c in members))
        base = sp.Rational(int(sampler.rng.integers(2, 6)), int(sampler.rng.integers(1, 4)))
        for node, coefficient in members:
            replacements[node] = base ** (scale * coefficient)
    return e.xreplace(replacements)


def _numeric_value(value: sp.Expr) -> sp.Expr | None:
    """
    Exact value of a sampled expression, 0 when it vanishes.

    Samples are algebraic numbers, so a value is zero exactly when its
    minimal polynomial is ``z``. Returns None if that can not be decided.
    """
    if value.is_Rational:
        return value
    value = sp.expand(sp.radsimp(sp.together(value)))
    if value.is_Rational or not value.is_number:
        return value
    if value.is_zero is not None:
        return sp.Integer(0) if value.is_zero else value
    try:
        polynomial = sp.minimal_polynomial(value, _Z)
    except (sp.polys.polyerrors.NotAlgebraic, NotImplementedError):
        logger.debug("can not decide whether %s is zero", value)
        return None
    return sp.Integer(0) if polynomial == _Z else value


def _sample_once(e: sp.Expr, table: SymbolTable, sampler: _Sampler) -> tuple:
    point = {}
    for node in _outer_nodes(e, (AtomApplication,)):
        point[node] = sampler.rational()
    e = e.xreplace(point)

    generators = {}
    for node in _outer_nodes(e, (sp.log, sp.atan)):
        generators[node] = sampler.rational()
    e = e.xreplace(generators)
    point.update(generators)

    in_exponents = _exponent_symbols(e)
    params = {}
    for symbol, spec in sorted(table.param_symbols.items(), key=lambda kv: kv[0].name):
        if symbol in e.free_symbols:
            params[symbol] = sampler.param_value(spec, integral=symbol in in_exponents)
    signs = {s: sampler.sign(s) for s in sorted(table.sign_symbols, key=lambda s: s.name) if s in e.free_symbols}
    e = e.xreplace({**params, **signs})
    point.update(params)
    point.update(signs)

    e = _evaluate_exponentials(e, sampler)
    power = _radical_denominator(e)
    values = {}
    for symbol in sorted(e.free_symbols, key=lambda s: s.name):
        chart_sign = sampler.chart.sign_of(symbol.name)
        values[symbol] = (chart_sign or 1) * sampler.rational(signed=False) ** power
    point.update(values)
    return e.xreplace(values), point


def is_zero(
    e: sp.Expr,
    table: SymbolTable,
    chart: Chart | None = None,
    options: ZeroTestOptions = DEFAULT_OPTIONS,
) -> ZeroVerdict:
    """
    Decide whether ``e`` vanishes identically on ``chart``.

    Parameters
    ----------
    e : sympy.Expr
        Expression over the declared symbols of ``table``.
    table : SymbolTable
        Declarations, rules and signs.
    chart : Chart, optional
        Signs used for absolute values and sample points. Defaults to the
        chart of ``table``.
    options : ZeroTestOptions, optional
        Seed and number of samples.

    Returns
    -------
    ZeroVerdict
        Truthy if zero. The certificate is ``structural`` when the normal form
        is zero, ``probabilistic`` when only the samples vanish, ``witness``
        when a sample is nonzero.

    Raises
    ------
    KernelInconsistency
        If the structural and numeric tests disagree in a way that is
        impossible for a correct kernel.
    """
    chart = table.chart if chart is None else chart
    e = localize(e, table, chart, strict=False)
    structural = normalize(e, table)
    prepared = prepare(e, table)
    sampler = _Sampler(table, chart, options.seed)

    nonzero_point = None
    drawn = 0
    singular = 0
    while drawn < options.samples:
        value, point = _sample_once(prepared, table, sampler)
        if not value.has(sp.zoo, sp.nan, sp.oo, -sp.oo):
            value = _numeric_value(value)
            if value is not None:
                drawn += 1
        else:
            value = None
        if value is None:
            singular += 1
            if singular > options.max_resample:
                raise LieHeatError(
                    f"zero test found no regular sample point after {singular} attempts"
                )
            continue
        if value != 0:
            nonzero_point = {"point": {str(k): str(v) for k, v in point.items()}, "value": str(value)}
            break

    if structural == 0:
        if nonzero_point is not None:
            raise KernelInconsistency(
                f"expression normalizes to zero but is {nonzero_point['value']} at a sample point"
            )
        return ZeroVerdict(True, "structural")
    if nonzero_point is not None:
        return ZeroVerdict(False, "witness", nonzero_point)
    if _is_transcendental(prepared):
        logger.warning(
            "expression with nonzero normal form vanished at %d sample points; accepted as zero",
            drawn,
        )
        return ZeroVerdict(True, "probabilistic")
    raise KernelInconsistency(f"rational expression {structural} vanished at every sample point")
