"""
Exception hierarchy of the engine.

Every error raised on purpose derives from `LieHeatError`, which keeps the
human readable text in ``message`` so the command-line front end can report
it without a traceback.
"""


class LieHeatError(Exception):
    """
    Base class for all engine errors.

    Attributes
    ----------
    message : str
        Error message describing the failure.
    """

    def __init__(self, message="symbolic engine failure"):
        self.message = message
        super().__init__(self.message)


class DeclarationError(LieHeatError):
    """
    A name was used before it was declared, or declared twice.

    Attributes
    ----------
    name : str
        Offending name.
    suggestions : tuple of str
        Close declared names, best match first.
    """

    def __init__(self, message, name="", suggestions=()):
        self.name = name
        self.suggestions = tuple(suggestions)
        if self.suggestions:
            message = f"{message} (did you mean {', '.join(self.suggestions)}?)"
        super().__init__(message)


class ProlongationOrderError(LieHeatError):
    def __init__(self, message="prolongation order exceeded"):
        super().__init__(message)


class ChartError(LieHeatError):
    """An absolute value or sign could not be resolved on the active chart."""


class KernelInconsistency(LieHeatError):
    """
    Two independent ways of computing the same quantity disagree.

    This always signals a bug in the engine, never a property of the input.
    """


class ParseError(LieHeatError):
    """
    Text could not be turned into an expression.

    Attributes
    ----------
    span : SourceSpan or None
        Location of the offending token.
    """

    def __init__(self, message, span=None):
        self.span = span
        if span is not None:
            message = f"{message} at line {span.line}, column {span.column}"
        super().__init__(message)


class PointFieldViolation(LieHeatError):
    """A vector field coefficient depends on a derivative of u."""


class ClassViolation(LieHeatError):
    """An equation or map leaves the class u_t = u_xx + F(t, x, u, u_x)."""


class SplitError(LieHeatError):
    """A residual is not polynomial in the jet variables it is split by."""


class NotClosedError(LieHeatError):
    """
    A set of fields does not span a Lie algebra.

    Attributes
    ----------
    pair : tuple of int
        Indices of the failing commutator.
    residual : VectorField or None
        The commutator that is not in the span.
    """

    def __init__(self, message, pair=(), residual=None):
        self.pair = tuple(pair)
        self.residual = residual
        super().__init__(message)


class ParameterError(LieHeatError):
    """A numeric invariant was requested of a tensor with free parameters."""


class DimensionError(LieHeatError):
    """Algebra dimension outside the supported range."""


class MapError(LieHeatError):
    """An equivalence map is malformed, not invertible or outside the group."""


class CatalogError(LieHeatError):
    """
    A catalog document is malformed.

    Attributes
    ----------
    entry_id : str or None
        Entry the problem was found in.
    span : SourceSpan or None
        Location inside the catalog text.
    """

    def __init__(self, message, entry_id=None, span=None):
        self.entry_id = entry_id
        self.span = span
        where = []
        if entry_id:
            where.append(f"entry {entry_id}")
        if span is not None:
            where.append(f"line {span.line}, column {span.column}")
        if where:
            message = f"{message} ({'; '.join(where)})"
        super().__init__(message)
