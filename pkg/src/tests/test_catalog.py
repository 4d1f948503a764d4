"""
Unit tests for the `catalog` package.

Covers the catalog document format, the per-kind verifiers, the errata
ledger and the report format.
"""

import json
from dataclasses import replace
from unittest.mock import patch

import pytest

from lieheat.catalog import (
    ErrataRecord,
    census,
    dump_json,
    load,
    load_errata,
    parse_catalog,
    read_catalog,
    render_json,
    render_text,
    validate_report,
    verify_all,
    verify_entry,
)
from lieheat.utils import CatalogError, LieHeatError, load_settings

HEADER = "schema = lieheat-catalog/1\n\n"

HEAT = """
[entry X.heat]
kind = realization
census = yes
basis = dt;
  dx
F = H(u, u_x)
label = A_{2.1}
"""


@pytest.fixture(scope="module")
def settings():
    return load_settings(env={})


@pytest.fixture(scope="module")
def shipped(settings):
    return {entry.id: entry for entry in load(settings.catalog, settings.prelude, check=False)}


@pytest.fixture
def heat(settings):
    return parse_catalog(HEADER + HEAT, prelude=settings.prelude).entries[0]


def test_parse_catalog(heat):
    """
    Test the `parse_catalog` function on a realization with a continuation line.
    """
    assert heat.id == "X.heat"
    assert heat.basis == ("dt", "dx")
    assert heat.dimension == 2
    assert heat.census
    assert heat.span.line == 4


def test_parse_catalog_empty():
    """
    Test the `parse_catalog` function on a document without entries.
    """
    assert parse_catalog("# nothing here\n").entries == ()


@pytest.mark.parametrize(
    "text, message",
    [
        ("schema = other/1\n" + HEAT, "unsupported schema"),
        (HEADER + HEAT + HEAT, "duplicate entry id"),
        (HEADER + HEAT + "colour = red\n", "unknown key 'colour'"),
        (HEADER + "[entry X.1]\nkind = realization\nbasis = dt\n", "realization entry needs F"),
        (HEADER + "[entry X.1]\nkind = orbit\n", "unknown kind"),
        (HEADER + "[entry X.1]\nbasis = dt\n", "entry has no kind"),
        (HEADER + "[entry X.1]\nkind = linearization\nF = 0\nstep = map t -> 4*t\n", "needs an inverse"),
        (HEADER + "[entry X.1]\nkind = linearization\nF = 0\nstep = swap u\n", "step reads"),
        (HEADER + "[entry X.1]\nkind = realization\nkind = abstract\n", "given twice"),
        ("  basis = dt\n", "continuation line without a key"),
        (HEADER + "[X.1]\n", "malformed block header"),
        (HEADER + "census = 3, x\n", "census must list integers"),
    ],
)
def test_parse_catalog_errors(text, message):
    """
    Test the `parse_catalog` function rejecting malformed documents.
    """
    with pytest.raises(CatalogError, match=message):
        parse_catalog(text, check=False)


def test_parse_catalog_validation(settings):
    """
    Test the `parse_catalog` function reporting a basis that is not closed with the entry id.
    """
    text = HEADER + "[entry X.open]\nkind = realization\nbasis = dx; x^2*dx\nF = 0\n"
    with pytest.raises(CatalogError) as info:
        parse_catalog(text, prelude=settings.prelude)
    assert info.value.entry_id == "X.open"
    assert len(parse_catalog(text, prelude=settings.prelude, check=False).entries) == 1


def test_read_catalog_errors():
    """
    Test the `read_catalog` function with a missing file and a wrong argument type.
    """
    with pytest.raises(FileNotFoundError, match="not found"):
        read_catalog("missing.cat")
    with pytest.raises(TypeError):
        read_catalog(3)


def test_shipped_catalog(settings, shipped):
    """
    Test the `census` function on the shipped catalog against its published counts.
    """
    document = read_catalog(settings.catalog, settings.prelude, check=False)
    assert document.census_claim == {1: 3, 2: 7, 3: 28, 4: 12}
    assert census(shipped.values()) == {1: 3, 2: 7, 3: 28, 4: 12}
    assert len(shipped) == len(document.entries)


def test_dump_json(heat):
    """
    Test the `dump_json` function mirroring the keys as written.
    """
    document = json.loads(dump_json([heat]))
    assert document["schema"] == "lieheat-catalog/1"
    assert document["entries"][0]["id"] == "X.heat"
    assert {"key": "basis", "value": "dt; dx"} in document["entries"][0]["fields"]


def test_verify_entry_realization(heat, settings):
    """
    Test the `verify_entry` function on a realization that passes every check.
    """
    report = verify_entry(heat, settings.prelude)
    assert report.passed
    assert report.closure_ok and report.label_ok
    assert report.residual_zero == {"*": (True, True)}
    assert report.label.startswith("A_{2.1}")


@pytest.mark.parametrize(
    "change, flag",
    [
        ({"F": "H(u, u_x) + x"}, "residual"),
        ({"F": "H(t, u_x)"}, "residual"),
        ({"label": "A_{2.2}"}, "label_ok"),
        ({"basis": ("dt", "x*dx")}, "residual"),
    ],
)
def test_verify_entry_negative_controls(heat, settings, change, flag):
    """
    Test the `verify_entry` function failing on perturbed data.
    """
    report = verify_entry(replace(heat, **change), settings.prelude)
    assert not report.passed
    assert report.failures
    if flag == "label_ok":
        assert report.label_ok is False
    else:
        assert False in [f for flags in report.residual_zero.values() for f in flags]


def test_verify_entry_not_closed(heat, settings):
    """
    Test the `verify_entry` function reporting a basis that is not closed.
    """
    report = verify_entry(replace(heat, basis=("dx", "x^2*dx")), settings.prelude)
    assert report.closure_ok is False
    assert any(failure.startswith("closure") for failure in report.failures)


def test_verify_entry_chart_index(heat, settings):
    """
    Test the `verify_entry` function recording an out-of-range chart as an error.
    """
    report = verify_entry(heat, settings.prelude, chart_index=2)
    assert "chart 2 requested" in report.error
    assert not report.passed
    with pytest.raises(TypeError):
        verify_entry("X.heat")


@pytest.mark.parametrize("entry_id", ["R1.dt", "R2.A2_2.1", "S.burgers", "A.3_5", "L.dec-zero", "M.source-exp", "G.A2_2.1"])
def test_verify_shipped_entries(shipped, settings, entry_id):
    """
    Test the `verify_entry` function on shipped entries of every kind.
    """
    report = verify_entry(shipped[entry_id], settings.prelude)
    assert report.passed, report.failures or report.error


def test_verify_shipped_errata(shipped, settings):
    """
    Test the `verify_entry` function raising an errata note for a published variant.
    """
    report = verify_entry(shipped["T1.A3_2.1"], settings.prelude)
    assert report.checks_ok
    assert not report.passed
    assert [record.key for record in report.errata] == [("T1.A3_2.1", "alt")]


def test_verify_negative_controls_other_kinds(shipped, settings):
    """
    Test the `verify_entry` function on perturbed abstract, linearization and subgroup entries.
    """
    abstract = replace(shipped["A.3_5"], relations="[e1, e2] = e2; [e2, e3] = e1")
    assert verify_entry(abstract, settings.prelude).closure_ok is False

    chain = shipped["L.dec-zero"]
    wrong = replace(chain, steps=(replace(chain.steps[0], expect="1"),))
    assert verify_entry(wrong, settings.prelude).target_ok is False

    subgroup = replace(shipped["G.A2_2.1"], member=("u -> u + t*x", "u -> u - t*x"))
    assert verify_entry(subgroup, settings.prelude).target_ok is False


def test_verify_all(heat, settings, shipped):
    """
    Test the `verify_all` function sorting reports and separating tolerated from unexpected failures.
    """
    broken = replace(heat, id="X.broken", F="H(u, u_x) + x")
    errata = load_errata(settings.errata)
    summary = verify_all([heat, broken, shipped["T1.A3_2.1"]], settings.prelude, errata=errata)
    assert [r.entry_id for r in summary.reports] == ["T1.A3_2.1", "X.broken", "X.heat"]
    assert summary.unexpected == ["X.broken"]
    assert [record.key for record in summary.tolerated] == [("T1.A3_2.1", "alt")]
    assert summary.tolerated[0].status == "confirmed-discrepancy"
    assert summary.exit_code == 1


def test_verify_all_empty():
    """
    Test the `verify_all` function on an empty entry list.
    """
    summary = verify_all([])
    assert summary.exit_code == 0
    assert summary.headline() == "all entries pass (0 checked)"


def test_verify_all_resolved_and_census(heat, settings):
    """
    Test the `verify_all` function reporting resolved ledger records and census mismatches.
    """
    ledger = {("X.heat", "alt"): ErrataRecord("X.heat", "alt", "old", "new", "confirmed-discrepancy")}
    summary = verify_all([heat], settings.prelude, errata=ledger, census_claim={2: 2})
    assert [record.status for record in summary.resolved] == ["resolved"]
    assert summary.unexpected == ["census"]


def test_load_errata(settings):
    """
    Test the `load_errata` function on the shipped ledger.
    """
    ledger = load_errata(settings.errata)
    record = ledger[("T1.A3_2.1", "alt")]
    assert record.status == "confirmed-discrepancy"
    assert all(key == (r.entry_id, r.variant) for key, r in ledger.items())


@pytest.mark.parametrize(
    "document, message",
    [
        ({"ERRATA": ["x"]}, "not a mapping"),
        ({"ERRATA": [{"entry": "a", "variant": "alt", "claim": "c", "computed": "d", "status": "maybe"}]}, "errata status"),
        ({"ERRATA": [{"entry": "a", "variant": "alt", "claim": "", "computed": "d"}]}, "'claim' is empty"),
        ({"ERRATA": [{"entry": "a", "variant": "alt", "claim": "c", "computed": "d"}] * 2}, "listed twice"),
    ],
)
def test_load_errata_errors(document, message):
    """
    Test the `load_errata` function rejecting malformed ledgers.
    """
    with patch("lieheat.catalog.reports._read_yaml", return_value=document):
        with pytest.raises(CatalogError, match=message):
            load_errata("errata.yaml")


@patch("lieheat.catalog.reports._read_yaml")
def test_load_errata_empty(mock_read_yaml):
    """
    Test the `load_errata` function on a ledger without records.
    """
    mock_read_yaml.return_value = {}
    assert load_errata("errata.yaml") == {}


def test_report_rendering(heat, settings):
    """
    Test the `render_json`, `render_text` and `validate_report` functions.
    """
    broken = replace(heat, id="X.broken", F="H(u, u_x) + x")
    summary = verify_all([heat, broken], settings.prelude)
    document = json.loads(render_json(summary.to_dict(timing=True)))
    assert document["summary"]["unexpected"] == ["X.broken"]
    assert document["summary"]["exit_code"] == 1
    assert validate_report(summary.to_dict()) == []
    assert validate_report({"schema": "lieheat-report/1"})
    with pytest.raises(LieHeatError, match="does not match its schema"):
        render_json({})

    text = render_text(summary)
    assert "PASS    X.heat" in text
    assert "FAIL    X.broken" in text
    assert text.splitlines()[-1] == summary.headline()


def _perturbed(entry, change):
    if "basis" in change:
        index, old, new = change["basis"]
        basis = list(entry.basis)
        assert old in basis[index]
        basis[index] = basis[index].replace(old, new)
        return replace(entry, basis=tuple(basis))
    return replace(entry, **change)


@pytest.mark.parametrize(
    "entry_id, change, flag",
    [
        ("R2.A2_1.1", {"F": "H(u, u_x) + t*u"}, "residual"),
        ("R2.A2_1.2", {"F": "H(x, u_x) + u"}, "residual"),
        ("R2.A2_1.3", {"F": "-alpha'(t)*u*u_x + H(t, u_x) + x"}, "residual"),
        ("R2.A2_2.1", {"F": "u_x^2*H(u, x*u_x) + u"}, "residual"),
        ("R2.A2_2.2", {"F": "t^(-1)*H(u, t*u_x^2) + u"}, "residual"),
        ("T1.A3_1.1", {"F": "G(u_x) + u"}, "residual"),
        ("R2.A2_2.4", {"basis": (0, "dx - u*du", "dx + u*du")}, "residual"),
        ("T2.A3_3.1", {"basis": (2, "+ x^2*du", "- x^2*du")}, "residual"),
        ("S.burgers", {"basis": (1, "t*dx + du", "t*dx - du")}, "residual"),
        ("S.dec-generic", {"basis": (3, "(1 + lam)*t", "(1 - lam)*t")}, "residual"),
        ("T2.A3_3.1", {"label": "A_{3.2}"}, "label_ok"),
    ],
)
def test_verify_shipped_negative_controls(shipped, settings, entry_id, change, flag):
    """
    Test the `verify_entry` function failing on perturbed shipped entries.
    """
    report = verify_entry(_perturbed(shipped[entry_id], change), settings.prelude)
    assert not report.passed
    assert report.failures
    if flag == "label_ok":
        assert report.label_ok is False
    else:
        assert False in [f for flags in report.residual_zero.values() for f in flags]


@pytest.mark.slow
def test_verify_all_shipped(settings):
    """
    Test the `verify_all` function on the whole shipped catalog with its errata ledger.
    """
    document = read_catalog(settings.catalog, settings.prelude, check=False)
    summary = verify_all(
        document.entries,
        settings.prelude,
        errata=load_errata(settings.errata),
        jobs=4,
        census_claim=document.census_claim,
    )
    assert summary.unexpected == [], [
        (r.entry_id, r.failures or r.error) for r in summary.reports if r.entry_id in summary.unexpected
    ]
    assert summary.resolved == []
    assert summary.exit_code == 0
    assert summary.census == {1: 3, 2: 7, 3: 28, 4: 12}
    assert len(summary.reports) == len(document.entries)
