"""
Unit tests for the `equiv` package.

Covers concrete and abstract equivalence maps, the transformation of
equations of the class and the equivalence generator.
"""

import pytest
import sympy as sp

from lieheat.equiv import (
    ABSTRACT,
    abstract_map,
    basis_form_preserved,
    compose,
    equivalence_operator,
    identity_map,
    inverse,
    parse_components,
    parse_map,
    parse_substitution,
    pushforward_field,
    rename_family,
    substitute_dependent,
    transform_pde,
    verify_class_preservation,
)
from lieheat.expr import default_table, is_zero
from lieheat.fields import VectorField
from lieheat.parser import parse_expr, parse_field
from lieheat.utils import ClassViolation, MapError, load_settings


@pytest.fixture
def table():
    return default_table(load_settings(env={}).prelude)


@pytest.fixture
def scaling(table):
    return parse_map("t -> 4*t, x -> 2*x, u -> u", "t -> t/4, x -> x/2, u -> u", table)


def test_parse_components(table):
    """
    Test the `parse_components` function leaving omitted components unchanged.
    """
    t, x, u = table.coordinates()
    assert parse_components("x -> -x", table) == (t, -x, u)
    with pytest.raises(MapError, match="components read"):
        parse_components("y -> t", table)


def test_parse_map(scaling, table):
    """
    Test the `parse_map` function with a correct inverse.
    """
    t, x, u = table.coordinates()
    assert scaling.forward == (4 * t, 2 * x, u)
    assert scaling.eps == 1
    assert parse_map("x -> -x", "x -> -x", table).eps == -1


def test_parse_map_wrong_inverse(table):
    """
    Test the `parse_map` function rejecting an inverse that does not compose to the identity.
    """
    with pytest.raises(MapError, match="supplied inverse is wrong"):
        parse_map("t -> 4*t, x -> 2*x", "t -> t/2, x -> x/2", table)


def test_parse_map_outside_group(table):
    """
    Test the `parse_map` function rejecting a map that does not scale t by the square of the x scale.
    """
    with pytest.raises(MapError, match="outside the equivalence group"):
        parse_map("x -> 2*x", "x -> x/2", table)
    m = parse_map("x -> 2*x", "x -> x/2", table, check_group=False)
    with pytest.raises(ClassViolation):
        transform_pde(m, parse_expr("u^2", table))


def test_transform_pde(scaling, table):
    """
    Test the `transform_pde` function on a scaling of the exponential nonlinearity.
    """
    u = table.lookup("u")
    assert transform_pde(scaling, parse_expr("exp(u)", table)) == sp.exp(u) / 4
    with pytest.raises(ClassViolation):
        transform_pde(scaling, table.lookup("u_xx"))


def test_transform_pde_abstract(table):
    """
    Test the `transform_pde` function refusing an abstract map.
    """
    with pytest.raises(MapError, match="concrete map"):
        transform_pde(abstract_map(table), parse_expr("u", table))


def test_compose_and_inverse(scaling, table):
    """
    Test the `compose`, `inverse` and `identity_map` functions.
    """
    t, x, u = table.coordinates()
    shift = parse_map("t -> t + 1", "t -> t - 1", table)
    composite = compose(scaling, shift)
    assert composite.forward == (4 * t + 1, 2 * x, u)
    assert sp.simplify(composite.inverse[0] - (t - 1) / 4) == 0
    assert inverse(scaling).forward == scaling.inverse
    assert identity_map(table).forward == (t, x, u)
    with pytest.raises(MapError, match="only concrete maps compose"):
        compose(scaling, abstract_map(table))
    with pytest.raises(MapError):
        inverse(abstract_map(table))


def test_pushforward_field(scaling, table):
    """
    Test the `pushforward_field` function on translations and the dilation.
    """
    t, x, _ = table.coordinates()
    assert pushforward_field(scaling, parse_field("dt", table)) == VectorField(4, 0, 0)
    assert pushforward_field(scaling, parse_field("2*t*dt + x*dx", table)) == VectorField(2 * t, x, 0)


def test_pushforward_field_abstract(table):
    """
    Test the `pushforward_field` function with the generic map and the reduced class.
    """
    m = abstract_map(table)
    assert m.kind == ABSTRACT
    t = table.independent["t"]
    image = pushforward_field(m, parse_field("dt", table))
    assert image.components[0] == m.table.atom("T")(t, orders=(1,))
    with pytest.raises(ClassViolation, match="tau depends on x"):
        pushforward_field(m, parse_field("x*dt", table))


def test_basis_form_preserved(scaling, table):
    """
    Test the `basis_form_preserved` function with a map that keeps and one that breaks a basis.
    """
    basis = [parse_field(text, table) for text in ("dt", "dx", "2*t*dt + x*dx")]
    assert basis_form_preserved(scaling, basis) == [True, True, True]

    shear = parse_map("u -> u + t*x", "u -> u - t*x", table)
    basis = [parse_field("dt", table), parse_field("du", table)]
    assert basis_form_preserved(shear, basis) == [False, True]


def test_basis_form_preserved_pattern(table):
    """
    Test the `basis_form_preserved` function rejecting an image that stays in the span with another form.
    """
    galilei = parse_map("x -> x + t", "x -> x - t", table)
    basis = [parse_field("dt", table), parse_field("dx", table)]
    assert basis_form_preserved(galilei, basis) == [False, True]

    shift = parse_map("t -> t + 1", "t -> t - 1", table)
    basis = [parse_field(text, table) for text in ("-t*dt - 1/2*x*dx", "dt")]
    assert basis_form_preserved(shift, basis) == [True, True]


def test_verify_class_preservation(table):
    """
    Test the `verify_class_preservation` function on the generic map and on a map outside the group.
    """
    assert verify_class_preservation(abstract_map(table)).preserved

    result = verify_class_preservation(abstract_map(table, x_bar="x^2"))
    assert not result.preserved
    assert "u_xx" in result.offending


def test_substitute_dependent(table):
    """
    Test the `substitute_dependent` function linearizing the potential Burgers equation.
    """
    v = table.jet("v")
    substitution = parse_substitution("u = ln(v)", table)
    form = substitute_dependent(substitution, parse_expr("u_x^2", table))
    assert form.rhs == 0
    assert form.factor == 1 / v
    assert form.family == "v"


@pytest.mark.parametrize(
    "text, message",
    [
        ("v = u", "must read"),
        ("u = v_x", "may only depend"),
        ("u = t", "not invertible"),
    ],
)
def test_parse_substitution_errors(table, text, message):
    """
    Test the `parse_substitution` function rejecting substitutions that are not point changes of u.
    """
    with pytest.raises(MapError, match=message):
        parse_substitution(text, table)


def test_rename_family(table):
    """
    Test the `rename_family` function.
    """
    u, u_x = table.lookup("u"), table.lookup("u_x")
    assert rename_family(u + u_x, table, "u", "v") == table.jet("v") + table.jet("v", 0, 1)


def test_equivalence_operator(table):
    """
    Test the `equivalence_operator` function on the dilation and the scaling of u.
    """
    t, x, u = table.coordinates()
    F = table.atom("F")(t, x, u, table.lookup("u_x"))

    translation = equivalence_operator(table, theta=1, chi=0, psi=0)
    assert translation.field == VectorField(1, 0, 0)
    assert translation.eta_F == 0

    dilation = equivalence_operator(table, theta=2 * t, chi=0, psi=0)
    assert dilation.field == VectorField(2 * t, x, 0)
    assert is_zero(dilation.eta_F + 2 * F, table)

    scaling = equivalence_operator(table, theta=0, chi=0, psi=u)
    assert is_zero(scaling.eta_F - F, table)

    with pytest.raises(ClassViolation, match="theta must depend on t only"):
        equivalence_operator(table, theta=x)
