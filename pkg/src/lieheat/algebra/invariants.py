"""
Basis-independent invariants of a Lie algebra given by structure constants.

Subspaces are handled as lists of coordinate column vectors and reduced to a
basis with ``sympy.Matrix`` exact linear algebra.
"""

import itertools
from dataclasses import dataclass

import sympy as sp

from lieheat.algebra.structure import StructureConstants
from lieheat.utils import ParameterError


def span(vectors, dim: int) -> list:
    """Basis of the span of ``vectors``, in reduced row echelon form."""
    vectors = [sp.Matrix(v) for v in vectors]
    if not vectors:
        return []
    matrix = sp.Matrix.hstack(*vectors).T
    reduced, pivots = matrix.rref(simplify=sp.cancel)
    return [reduced.row(i).T for i in range(len(pivots))]


def bracket_space(c: StructureConstants, first: list, second: list) -> list:
    """Basis of ``[first, second]``."""
    products = [c.bracket(a, b) for a in first for b in second]
    return span([p for p in products if any(x != 0 for x in p)], c.dim)


def _whole(c: StructureConstants) -> list:
    return [c.basis_vector(i) for i in range(c.dim)]


def _require_numeric(c: StructureConstants):
    if c.free_params:
        names = ", ".join(sorted(s.name for s in c.free_params))
        raise ParameterError(f"invariant needs numeric structure constants; instantiate {names}")


def _series(c: StructureConstants, step) -> list:
    current = _whole(c)
    dims = [len(current)]
    while True:
        following = step(current)
        dims.append(len(following))
        if len(following) == len(current) or not following:
            return dims
        current = following


def derived_series(c: StructureConstants) -> list:
    """
    Dimensions of ``L, [L, L], [[L, L], [L, L]], ...`` until they stabilize.

    The stable value is listed once more, e.g. ``[3, 3]`` for a perfect
    algebra and ``[2, 1, 0]`` for the non-abelian two-dimensional one.
    """
    _require_numeric(c)
    return _series(c, lambda current: bracket_space(c, current, current))


def lower_central_series(c: StructureConstants) -> list:
    """Dimensions of ``L, [L, L], [L, [L, L]], ...`` until they stabilize."""
    _require_numeric(c)
    whole = _whole(c)
    return _series(c, lambda current: bracket_space(c, whole, current))


def derived_algebra(c: StructureConstants) -> list:
    whole = _whole(c)
    return bracket_space(c, whole, whole)


def center(c: StructureConstants) -> list:
    """Basis of the center."""
    _require_numeric(c)
    blocks = [c.adjoint(c.basis_vector(j)) for j in range(c.dim)]
    # x is central iff [e_j, x] = ad(e_j) x = 0 for every j
    return span(sp.Matrix.vstack(*blocks).nullspace(simplify=sp.cancel), c.dim)


@dataclass(frozen=True)
class KillingForm:
    """
    Killing form with its rank and signature.

    Attributes
    ----------
    matrix : sympy.Matrix
        ``K[i, j] = tr(ad e_i ad e_j)``.
    rank : int
        Rank of ``matrix``.
    signature : tuple of int
        Numbers of positive and negative eigenvalues.
    """

    matrix: sp.Matrix
    rank: int
    signature: tuple


def _sign_changes(coefficients) -> int:
    signs = [sp.sign(c) for c in coefficients if c != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def killing_form(c: StructureConstants) -> KillingForm:
    """
    Killing form of ``c``.

    The signature comes from Descartes' rule of signs applied to the
    characteristic polynomial, exact for a symmetric matrix.

    Raises
    ------
    ParameterError
        If the structure constants still contain parameters.
    """
    _require_numeric(c)
    ads = [c.adjoint(c.basis_vector(i)) for i in range(c.dim)]
    matrix = sp.Matrix(c.dim, c.dim, lambda i, j: sp.cancel((ads[i] * ads[j]).trace()))
    lam = sp.Symbol("lam")
    poly = sp.Poly(matrix.charpoly(lam).as_expr(), lam)
    coefficients = poly.all_coeffs()
    positive = _sign_changes(coefficients)
    mirrored = [c * (-1) ** (len(coefficients) - 1 - k) for k, c in enumerate(coefficients)]
    negative = _sign_changes(mirrored)
    return KillingForm(matrix, matrix.rank(), (positive, negative))


def radical(c: StructureConstants) -> list:
    """Solvable radical, the Killing-orthogonal complement of ``[L, L]``."""
    _require_numeric(c)
    K = killing_form(c).matrix
    derived = derived_algebra(c)
    if not derived:
        return _whole(c)
    rows = sp.Matrix.hstack(*derived).T * K
    return span(rows.nullspace(simplify=sp.cancel), c.dim)


def _is_nilpotent_matrix(m: sp.Matrix) -> bool:
    return (m ** m.shape[0]).applyfunc(sp.cancel).is_zero_matrix


def _is_ad_nilpotent(c: StructureConstants, subspace: list) -> bool:
    if not subspace:
        return True
    for combination in itertools.product((1, 2, -1), repeat=min(len(subspace), 3)):
        vector = sum(
            (k * v for k, v in zip(combination, subspace)), sp.zeros(c.dim, 1)
        )
        if not _is_nilpotent_matrix(c.adjoint(vector)):
            return False
    return all(_is_nilpotent_matrix(c.adjoint(v)) for v in subspace)


def _is_ideal(c: StructureConstants, subspace: list) -> bool:
    if not subspace:
        return True
    image = bracket_space(c, _whole(c), subspace)
    return len(span(subspace + image, c.dim)) == len(subspace)


def nilradical(c: StructureConstants) -> list:
    """
    Largest nilpotent ideal.

    It lies between ``[L, R]`` and ``R`` intersected with the kernel of the
    Killing form. That candidate is tested first; if some element is not
    ad-nilpotent, a search over small integer combinations grows ``[L, R]``
    instead.
    """
    _require_numeric(c)
    R = radical(c)
    K = killing_form(c).matrix
    kernel = span(K.nullspace(simplify=sp.cancel), c.dim)
    if R and kernel:
        candidate = _intersection(R, kernel, c.dim)
    else:
        candidate = []
    if _is_ideal(c, candidate) and _is_ad_nilpotent(c, candidate):
        base = span(candidate + bracket_space(c, _whole(c), R), c.dim)
        if len(base) == len(candidate):
            return candidate
    current = bracket_space(c, _whole(c), R)
    for extra in R:
        trial = span(current + [extra], c.dim)
        if len(trial) > len(current) and _is_ideal(c, trial) and _is_ad_nilpotent(c, trial):
            current = trial
    for a, b in itertools.product((1, -1, 2), repeat=2):
        for u, v in itertools.combinations(R, 2):
            trial = span(current + [a * u + b * v], c.dim)
            if len(trial) > len(current) and _is_ideal(c, trial) and _is_ad_nilpotent(c, trial):
                current = trial
    return current


def _intersection(first: list, second: list, dim: int) -> list:
    A = sp.Matrix.hstack(*first)
    B = sp.Matrix.hstack(*second)
    null = sp.Matrix.hstack(A, -B).nullspace(simplify=sp.cancel)
    return span([A * n[: A.shape[1], :] for n in null], dim)


def is_nilpotent(c: StructureConstants) -> bool:
    return lower_central_series(c)[-1] == 0


def is_solvable(c: StructureConstants) -> bool:
    return derived_series(c)[-1] == 0
