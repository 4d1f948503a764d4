"""
Unit tests for the `algebra` package.

Covers structure constants of vector field bases, the invariants and the
identification of low-dimensional algebras.
"""

import pytest
import sympy as sp

from lieheat.algebra import (
    Label,
    StructureConstants,
    canonical_name,
    center,
    classify,
    derived_series,
    direct_sum,
    is_nilpotent,
    is_solvable,
    jacobi_check,
    killing_form,
    lookup,
    lower_central_series,
    span_coefficients,
    structure_constants,
)
from lieheat.expr import default_table
from lieheat.parser import parse_field
from lieheat.utils import (
    DimensionError,
    LieHeatError,
    NotClosedError,
    ParameterError,
    load_settings,
)


@pytest.fixture
def table():
    return default_table(load_settings(env={}).prelude)


def test_from_relations():
    """
    Test the `StructureConstants.from_relations` method and the text it round-trips through.
    """
    heisenberg = StructureConstants.from_relations(3, "[e2, e3] = e1")
    assert heisenberg.tensor[1][2] == (1, 0, 0)
    assert heisenberg.tensor[2][1] == (-1, 0, 0)
    assert heisenberg.relations() == "[e2, e3] = e1"
    assert StructureConstants.from_relations(3, "[Q2, Q3] = Q1") == heisenberg


@pytest.mark.parametrize(
    "text, message",
    [
        ("e1 e2", "can not read"),
        ("[e1, e1] = e2", "invalid bracket indices"),
        ("[e1, e4] = e2", "invalid bracket indices"),
        ("[e1, e2] = e1*e2", "not linear"),
    ],
)
def test_from_relations_errors(text, message):
    """
    Test the `StructureConstants.from_relations` method rejecting malformed relations.
    """
    with pytest.raises(LieHeatError, match=message):
        StructureConstants.from_relations(3, text)


def test_jacobi_check():
    """
    Test the `jacobi_check` function on brackets that are not a Lie algebra.
    """
    text = "[e1, e2] = e2; [e2, e3] = e1"
    with pytest.raises(LieHeatError, match="Jacobi identity"):
        StructureConstants.from_relations(3, text)
    unchecked = StructureConstants.from_relations(3, text, checked=False)
    assert not jacobi_check(unchecked)
    assert jacobi_check(lookup("A_{3.3}").instance())


def test_change_basis():
    """
    Test the `StructureConstants.change_basis` method swapping two basis elements.
    """
    c = lookup("A_{2.2}").instance()
    swapped = c.change_basis([[0, 1], [1, 0]])
    assert swapped.tensor[0][1] == (-1, 0)
    with pytest.raises(LieHeatError, match="invertible"):
        c.change_basis([[1, 1], [1, 1]])


def test_span_coefficients(table):
    """
    Test the `span_coefficients` function with a field inside and outside the span.
    """
    basis = [parse_field("dt", table), parse_field("dx", table)]
    assert span_coefficients(parse_field("3*dt - dx", table), basis, table) == [3, -1]
    assert span_coefficients(parse_field("x*dx", table), basis, table) is None


def test_structure_constants(table):
    """
    Test the `structure_constants` function on translations and a dilation.
    """
    basis = [parse_field(text, table) for text in ("dt", "dx", "2*t*dt + x*dx")]
    c = structure_constants(basis, table)
    assert c.tensor[0][1] == (0, 0, 0)
    assert c.tensor[0][2] == (2, 0, 0)
    assert c.tensor[1][2] == (0, 1, 0)
    assert classify(c).label == Label("A_{3.9}", (("q", sp.Rational(1, 2)),))


def test_structure_constants_with_parameter(table):
    """
    Test the `structure_constants` function keeping a declared parameter.
    """
    lam = table.lookup("lam")
    basis = [parse_field(text, table) for text in ("dt", "dx", "lam*t*dx + x*dx")]
    c = structure_constants(basis, table)
    assert c.tensor[0][2] == (0, lam, 0)
    assert c.params == (lam,)
    with pytest.raises(ParameterError):
        classify(c)
    assert classify(c, {"lam": "3/7"}).label == Label("A_{3.2}")


def test_structure_constants_not_closed(table):
    """
    Test the `structure_constants` function on a basis that is not closed.
    """
    basis = [parse_field("dx", table), parse_field("x^2*dx", table)]
    with pytest.raises(NotClosedError) as info:
        structure_constants(basis, table)
    assert info.value.pair == (1, 2)
    assert info.value.residual is not None


def test_series():
    """
    Test the `derived_series` and `lower_central_series` functions.
    """
    affine = lookup("A_{2.2}").instance()
    assert derived_series(affine) == [2, 1, 0]
    assert lower_central_series(affine) == [2, 1, 1]
    assert is_solvable(affine) and not is_nilpotent(affine)

    heisenberg = lookup("A_{3.5}").instance()
    assert lower_central_series(heisenberg) == [3, 1, 0]
    assert is_nilpotent(heisenberg)

    sl2 = lookup("A_{3.3}").instance()
    assert derived_series(sl2) == [3, 3]
    assert not is_solvable(sl2)


def test_killing_form():
    """
    Test the `killing_form` function on the simple three-dimensional algebras.
    """
    assert killing_form(lookup("A_{3.3}").instance()).signature == (2, 1)
    assert killing_form(lookup("A_{3.4}").instance()).signature == (0, 3)
    assert killing_form(lookup("A_{3.5}").instance()).rank == 0
    with pytest.raises(ParameterError):
        killing_form(lookup("A_{3.9}").structure())


def test_direct_sum():
    """
    Test the `direct_sum` function and the center of the result.
    """
    c = direct_sum(lookup("A_{2.2}").instance(), lookup("A_1").instance())
    assert c.dim == 3
    assert c.tensor[0][1] == (0, 1, 0)
    assert len(center(c)) == 1
    assert classify(c).label == Label("A_{3.2}")


@pytest.mark.parametrize(
    "name, signature",
    [("A_{3.3}", (2, 1)), ("A_{3.4}", (0, 3)), ("A_{3.5}", (0, 0)), ("A_{3.1}", (0, 0))],
)
def test_classify_registry(name, signature):
    """
    Test the `classify` function recovering registry algebras without parameters.
    """
    fingerprint = classify(lookup(name).instance())
    assert fingerprint.label == Label(name)
    assert fingerprint.describe() == f"{name}; Killing signature ({signature[0]},{signature[1]})"
    assert not fingerprint.ambiguous


def test_classify_family():
    """
    Test the `classify` function on a parametrized family with a generic value.
    """
    fingerprint = classify(lookup("A_{3.9}").structure(), {"q": "1/3"})
    assert fingerprint.label == Label("A_{3.9}", (("q", sp.Rational(1, 3)),))
    assert fingerprint.consistent_with(Label.parse("A_{3.9}(q=1/3)"))
    assert not fingerprint.consistent_with(Label.parse("A_{3.9}(q=1/2)"))


def test_classify_four_dimensional():
    """
    Test the `classify` function splitting off a central direction and on a nilpotent algebra.
    """
    decomposable = direct_sum(lookup("A_{3.3}").instance(), lookup("A_1").instance())
    assert classify(decomposable).label == Label("A_{3.3}+A_1")
    assert classify(lookup("A_{4.1}").instance()).label == Label("A_{4.1}")


def test_classify_dimension():
    """
    Test the `classify` function rejecting algebras above dimension five.
    """
    with pytest.raises(DimensionError, match="Got 6"):
        classify(StructureConstants.zero(6))


def test_label_parse_and_matches():
    """
    Test the `Label.parse` and `Label.matches` methods.
    """
    label = Label.parse("A_{3.9}(q=lam)", {"lam": "1/3"})
    assert label == Label("A_{3.9}", (("q", sp.Rational(1, 3)),))
    assert str(label) == "A_{3.9}(q=1/3)"
    assert Label.parse("3A_1").name == "A_{3.1}"
    assert Label("A_{3.9}").matches(label)
    assert not Label("A_{3.8}").matches(label)


def test_canonical_name():
    """
    Test the `canonical_name` function resolving aliases and direct sum notation.
    """
    assert canonical_name("2A_1") == "A_{2.1}"
    assert canonical_name("A_{2.2} ⊕ A_1") == "A_{3.2}"
    assert canonical_name("sl(2,R)") == "A_{3.3}"
