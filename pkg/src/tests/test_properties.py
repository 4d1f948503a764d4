"""
Property-based tests of the symbolic kernel, the bracket and the classifier.
"""

import sympy as sp
from hypothesis import given, settings, strategies as st

from lieheat.algebra import classify, records, structure_constants
from lieheat.catalog import load
from lieheat.equiv import compose, inverse, parse_map, pushforward_field, transform_pde
from lieheat.expr import default_table, diff, is_zero, total_diff
from lieheat.fields import VectorField, commutator, prolong2
from lieheat.parser import parse_expr, parse_field, print_expr
from lieheat.utils import load_settings

SETTINGS = load_settings(env={})
TABLE = default_table(SETTINGS.prelude)
T, X, U = TABLE.coordinates()
U_X = TABLE.lookup("u_x")

MONOMIALS = (1, T, X, U, T * X, X * U, T**2, X**2, U**2)
ATOM_FACTORS = (
    TABLE.atom("G")(X * U_X),
    TABLE.atom("G")(X * U_X, orders=(1,)),
    TABLE.atom("alpha")(T, orders=(1,)),
    TABLE.atom("alpha")(T, orders=(2,)),
    TABLE.atom("alpha")(T, orders=(3,)),
    TABLE.atom("H")(U, T * U_X**2, orders=(1, 1)),
    TABLE.atom("g")(T, X, orders=(0, 2)),
)
CLASS_MEMBERS = ("u^2", "exp(u)*u_x", "x*u_x^2", "t*u + u_x", "t*u_x^3")

coefficients = st.lists(st.integers(-3, 3), min_size=len(MONOMIALS), max_size=len(MONOMIALS))


@st.composite
def vector_fields(draw):
    components = [
        sum(c * m for c, m in zip(draw(coefficients), MONOMIALS)) for _ in range(3)
    ]
    return VectorField(*components)


@st.composite
def polynomials(draw):
    terms = draw(
        st.lists(
            st.tuples(
                st.fractions(min_value=-5, max_value=5, max_denominator=4),
                st.integers(0, 2),
                st.integers(0, 2),
                st.integers(0, 2),
                st.integers(0, 2),
            ),
            max_size=5,
        )
    )
    return sum(
        (sp.Rational(c.numerator, c.denominator) * T**a * X**b * U**d * U_X**e for c, a, b, d, e in terms),
        sp.Integer(0),
    )


@st.composite
def unimodular(draw, n):
    lower = sp.eye(n)
    upper = sp.eye(n)
    for i in range(n):
        for j in range(i):
            lower[i, j] = draw(st.integers(-2, 2))
            upper[j, i] = draw(st.integers(-2, 2))
    return (lower * upper).tolist()


@st.composite
def group_maps(draw):
    k = draw(st.sampled_from((1, 2, 3, -1, -2)))
    m = draw(st.sampled_from((1, 2, 3, -1)))
    d, a, c0, b, c = (draw(st.integers(-2, 2)) for _ in range(5))
    forward = f"t -> {k * k}*t + ({d}), x -> ({k})*x + ({a})*t + ({c0}), u -> ({m})*u + ({b})*x + ({c})"
    old_t = f"(t - ({d}))/{k * k}"
    old_x = f"(x - ({a})*{old_t} - ({c0}))/({k})"
    backward = f"t -> {old_t}, x -> {old_x}, u -> (u - ({b})*{old_x} - ({c}))/({m})"
    return parse_map(forward, backward, TABLE)


@settings(max_examples=200, deadline=None)
@given(vector_fields(), vector_fields())
def test_commutator_antisymmetry(first, second):
    """
    Test the `commutator` function changing sign when its arguments are swapped.
    """
    total = commutator(first, second, TABLE) + commutator(second, first, TABLE)
    assert total.is_zero(TABLE)


@settings(max_examples=200, deadline=None)
@given(vector_fields(), vector_fields(), vector_fields())
def test_commutator_jacobi(a, b, c):
    """
    Test the `commutator` function satisfying the Jacobi identity.
    """
    total = (
        commutator(commutator(a, b, TABLE), c, TABLE)
        + commutator(commutator(b, c, TABLE), a, TABLE)
        + commutator(commutator(c, a, TABLE), b, TABLE)
    )
    assert total.is_zero(TABLE)


@settings(max_examples=50, deadline=None)
@given(polynomials())
def test_print_expr_parses_back(e):
    """
    Test the `print_expr` function output parsing back to the same polynomial.
    """
    assert sp.expand(parse_expr(print_expr(e, TABLE), TABLE) - e) == 0


@settings(max_examples=50, deadline=None)
@given(polynomials(), st.sampled_from(ATOM_FACTORS))
def test_print_expr_parses_back_with_atoms(e, factor):
    """
    Test the `print_expr` function output parsing back when atoms and their derivatives occur.
    """
    e = e * factor + factor**2
    printed = print_expr(e, TABLE)
    assert "[" not in printed.replace("D[", "")
    assert sp.expand(parse_expr(printed, TABLE) - e) == 0


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(records(3)), unimodular(3))
def test_classify_basis_independent(record, rows):
    """
    Test the `classify` function giving the same label in another basis.
    """
    c = record.instance()
    assert classify(c.change_basis(rows)).label == classify(c).label


@settings(max_examples=20, deadline=None)
@given(group_maps(), st.sampled_from(CLASS_MEMBERS))
def test_transform_pde_inverse(m, text):
    """
    Test the `transform_pde` function returning the original equation under the inverse map.
    """
    F = parse_expr(text, TABLE)
    back = transform_pde(inverse(m), transform_pde(m, F))
    assert is_zero(back - F, TABLE)

    identity = compose(m, inverse(m))
    assert all(is_zero(a - b, TABLE) for a, b in zip(identity.forward, (T, X, U)))


REALIZATIONS = tuple(
    entry.basis
    for entry in load(SETTINGS.catalog, SETTINGS.prelude, check=False)
    if entry.kind == "realization"
    and not (entry.charts or entry.declarations or entry.rules)
    and not any(word in "; ".join(entry.basis) for word in ("abs", "eps"))
)
G = TABLE.atom("G")


@settings(max_examples=500, deadline=None)
@given(polynomials(), polynomials(), st.sampled_from((T, X, U, U_X)))
def test_diff_leibniz(p, q, v):
    """
    Test the `diff` function obeying the product rule through an atom.
    """
    first, second = p * G(X * U_X), q
    product = diff(first * second, v, TABLE)
    assert is_zero(product - diff(first, v, TABLE) * second - first * diff(second, v, TABLE), TABLE)


@settings(max_examples=200, deadline=None)
@given(polynomials())
def test_total_diff_commute(p):
    """
    Test the `total_diff` function giving the same mixed derivative in either order.
    """
    e = p + G(X * U_X)
    tx = total_diff(total_diff(e, "t", TABLE, max_order=3), "x", TABLE, max_order=3)
    xt = total_diff(total_diff(e, "x", TABLE, max_order=3), "t", TABLE, max_order=3)
    assert is_zero(tx - xt, TABLE)


@settings(max_examples=100, deadline=None)
@given(
    vector_fields(),
    vector_fields(),
    st.fractions(min_value=-3, max_value=3, max_denominator=3),
    st.fractions(min_value=-3, max_value=3, max_denominator=3),
)
def test_prolong2_linear(first, second, a, b):
    """
    Test the `prolong2` function being linear in the field.
    """
    a, b = sp.Rational(a.numerator, a.denominator), sp.Rational(b.numerator, b.denominator)
    combined = prolong2(first * a + second * b, TABLE)
    one, two = prolong2(first, TABLE), prolong2(second, TABLE)
    for name in ("phi_t", "phi_x", "phi_xx"):
        expected = a * getattr(one, name) + b * getattr(two, name)
        assert is_zero(getattr(combined, name) - expected, TABLE)


@settings(max_examples=100, deadline=None)
@given(group_maps(), vector_fields(), vector_fields())
def test_pushforward_field_homomorphism(m, first, second):
    """
    Test the `pushforward_field` function commuting with the bracket.
    """
    image = pushforward_field(m, commutator(first, second, TABLE))
    bracket = commutator(pushforward_field(m, first), pushforward_field(m, second), TABLE)
    assert (image - bracket).is_zero(TABLE)


@settings(max_examples=60, deadline=None)
@given(group_maps(), st.sampled_from(REALIZATIONS))
def test_structure_constants_preserved(m, texts):
    """
    Test the `structure_constants` function returning the same tensor for a pushed-forward shipped basis.
    """
    basis = [parse_field(text, TABLE) for text in texts]
    image = [pushforward_field(m, q) for q in basis]
    before, after = structure_constants(basis, TABLE), structure_constants(image, TABLE)
    for plane, mapped in zip(before.tensor, after.tensor):
        for row, mapped_row in zip(plane, mapped):
            assert all(sp.cancel(a - b) == 0 for a, b in zip(row, mapped_row))


def test_shipped_realizations_sampled():
    """
    Test the `load` function supplying realizations of every dimension to the structure-constant property.
    """
    assert {len(basis) for basis in REALIZATIONS} == {1, 2, 3, 4}
