"""
Replaying the checks behind every catalog entry.

Each entry kind has its own verifier; `verify_entry` dispatches on the kind
and never raises for mathematical failures, which become report content.
`verify_all` runs the entries, optionally in worker processes, and weighs
the failures against the errata ledger.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import sympy as sp

from lieheat.algebra import Label, classify, jacobi_check, structure_constants
from lieheat.catalog.format import CatalogEntry, census
from lieheat.catalog.reports import ErrataRecord, VerificationReport, VerificationSummary
from lieheat.equiv import (
    basis_form_preserved,
    parse_map,
    parse_substitution,
    rename_family,
    substitute_dependent,
    transform_pde,
)
from lieheat.expr import DEFAULT_OPTIONS, ZeroTestOptions, is_zero
from lieheat.fields import invariance_residual
from lieheat.parser import parse_field, print_expr, print_field
from lieheat.utils import LieHeatError, NotClosedError, SplitError

logger = logging.getLogger(__name__)

_ANY_CHART = "*"


def _chart_name(chart) -> str:
    return chart.text or _ANY_CHART


def _print_system(residual, table) -> str:
    try:
        system = residual.monomial_system()
    except SplitError:
        return print_expr(residual.expr, table)
    return "; ".join(f"[{print_expr(m, table)}] {print_expr(c, table)}" for m, c in system)


def _generic(entry: CatalogEntry, generic_values: dict | None) -> dict:
    return {**(generic_values or {}), **entry.values}


def _select(charts: list, chart_index: int | None) -> list:
    if chart_index is None:
        return charts
    if not 1 <= chart_index <= len(charts):
        raise LieHeatError(f"chart {chart_index} requested, the entry has {len(charts)}")
    return [charts[chart_index - 1]]


def _check_closure_and_label(entry, fields, table, chart, options, generic, report):
    try:
        c = structure_constants(fields, table, chart, options)
    except NotClosedError as e:
        report.closure_ok = False
        outside = print_field(e.residual, table) if e.residual is not None else ""
        report.fail(f"closure: {e.message}{': ' + outside if outside else ''}")
        return
    report.closure_ok = True
    if not entry.label:
        return
    expected = Label.parse(entry.label, generic)
    fingerprint = classify(c, generic)
    report.label = fingerprint.describe()
    report.label_ok = fingerprint.consistent_with(expected)
    if not report.label_ok:
        report.fail(f"label: expected {expected}, computed {report.label}")


def _check_residuals(fields, names, F, table, charts, options, report):
    for chart in charts:
        flags = []
        for q, name in zip(fields, names):
            residual = invariance_residual(q, F, table, chart, options)
            vanishes = bool(residual.is_zero(options))
            if not vanishes:
                report.fail(f"residual of {name} on {_chart_name(chart)}: {_print_system(residual, table)}")
            logger.debug("%s: residual of %s on %s vanishes: %s", report.entry_id, name, _chart_name(chart), vanishes)
            flags.append(vanishes)
        report.residual_zero[_chart_name(chart)] = tuple(flags)


def _check_operators(entry, table, options, generic, chart_index, report, basis=None, F=None, charts=None):
    fields = entry.fields(table, basis)
    rhs = entry.expression(entry.F if F is None else F, table)
    chart_list = _select(entry.chart_list(table, charts), chart_index)
    _check_closure_and_label(entry, fields, table, chart_list[0], options, generic, report)
    names = [f"Q{k}" for k in range(1, len(fields) + 1)]
    operators = list(fields)
    for k, text in enumerate(entry.infinite, start=1):
        operators.append(parse_field(text, table))
        names.append(f"X_inf{k}" if len(entry.infinite) > 1 else "X_inf")
    _check_residuals(operators, names, rhs, table, chart_list, options, report)


def _alternate_claim(entry: CatalogEntry) -> str:
    if "claim" in entry.alternates:
        return entry.alternates["claim"]
    return "; ".join(f"{key} = {value}" for key, value in entry.alternates.items())


def _check_alternate(entry, run) -> list:
    """Errata raised by the published variant of ``entry``, run through ``run``."""
    keys = set(entry.alternates) - {"claim"}
    if not keys:
        return []
    scratch = VerificationReport(entry.id, entry.kind)
    try:
        run(scratch)
    except LieHeatError as e:
        scratch.error = e.message
    if scratch.checks_ok:
        logger.info("%s: the published variant passes as well", entry.id)
        return []
    computed = scratch.error or (scratch.failures[0] if scratch.failures else "failed")
    return [ErrataRecord(entry.id, "alt", _alternate_claim(entry), computed)]


def _verify_realization(entry, table, options, generic, chart_index, report):
    _check_operators(entry, table, options, generic, chart_index, report)
    alt = entry.alternates
    report.errata.extend(
        _check_alternate(
            entry,
            lambda scratch: _check_operators(
                entry,
                table,
                options,
                generic,
                chart_index,
                scratch,
                basis=tuple(p.strip() for p in alt["basis"].split(";")) if "basis" in alt else None,
                F=alt.get("F"),
                charts=alt.get("charts"),
            ),
        )
    )


def verify_symmetry_listing(
    entry: CatalogEntry,
    prelude=(),
    options: ZeroTestOptions = DEFAULT_OPTIONS,
    generic_values: dict | None = None,
    chart_index: int | None = None,
) -> VerificationReport:
    """
    Verify a listed symmetry algebra of an equation.

    Every listed operator, including the ``infinite`` ones carrying
    arbitrary functions constrained by the entry's rules, must leave the
    equation invariant on every chart. The finite part must close and, if
    a label is given, classify as expected.

    Returns
    -------
    VerificationReport
        Failures are report content.
    """
    return verify_entry(entry, prelude, options, generic_values, chart_index)


def _verify_abstract(entry, options, generic, report):
    c = entry.structure()
    report.closure_ok = jacobi_check(c)
    if not report.closure_ok:
        report.fail("Jacobi identity fails for the relations")
    for values in entry.instances:
        instance = c.subs(values)
        if not jacobi_check(instance):
            report.closure_ok = False
            report.fail(f"Jacobi identity fails at {values}")
    if entry.label:
        expected = Label.parse(entry.label, generic)
        fingerprint = classify(c, generic)
        report.label = fingerprint.describe()
        report.label_ok = fingerprint.consistent_with(expected)
        if not report.label_ok:
            report.fail(f"label: expected {expected}, computed {report.label}")


def _same(result, text, entry, table, chart, options) -> bool:
    return bool(is_zero(result - entry.expression(text, table), table, chart, options))


def _run_chain(entry, table, chart, options, report, noted):
    current = entry.expression(entry.F, table)
    expectations = []
    for n, step in enumerate(entry.steps, start=1):
        if step.kind == "sub":
            substitution = parse_substitution(step.text, table, chart, options)
            form = substitute_dependent(substitution, current, options)
            result, family = form.rhs, "v"
            logger.debug("%s step %d on %s: factor %s", entry.id, n, _chart_name(chart), form.factor)
        else:
            m = parse_map(step.text, step.inverse, table, chart, options, check_group=True)
            result, family = transform_pde(m, current, options), "u"
        computed = print_expr(result, table)
        if step.expect:
            matches = _same(result, step.expect, entry, table, chart, options)
            expectations.append(matches)
            if not matches:
                report.fail(f"step {n} on {_chart_name(chart)}: expected {step.expect}, computed {computed}")
        if step.claim and (n not in noted) and not _same(result, step.claim, entry, table, chart, options):
            noted.add(n)
            report.errata.append(
                ErrataRecord(entry.id, f"step {n}", step.claim, f"{computed} on {_chart_name(chart)}")
            )
        current = rename_family(result, table, "v", "u") if family == "v" else result
    return expectations


def verify_reduction(
    entry: CatalogEntry,
    prelude=(),
    options: ZeroTestOptions = DEFAULT_OPTIONS,
    generic_values: dict | None = None,
    chart_index: int | None = None,
) -> VerificationReport:
    """
    Recompute the targets of a linearization or reduction chain.

    Each step is applied to the computed result of the previous one:
    ``sub`` steps through `substitute_dependent`, ``map`` steps through
    `transform_pde` after checking the supplied inverse. A target differing
    from its ``expect`` text is a failure; one differing from its published
    ``claim`` is an errata note.

    Returns
    -------
    VerificationReport
        Failures are report content.
    """
    return verify_entry(entry, prelude, options, generic_values, chart_index)


def _verify_chain(entry, table, options, chart_index, report):
    noted = set()
    expectations = []
    for chart in _select(entry.chart_list(table), chart_index):
        expectations.extend(_run_chain(entry, table, chart, options, report, noted))
    if expectations:
        report.target_ok = all(expectations)


def _check_member(entry, table, options, chart_index, report, member):
    fields = entry.fields(table)
    preserved = []
    for chart in _select(entry.chart_list(table), chart_index):
        m = parse_map(member[0], member[1], table, chart, options, check_group=True)
        flags = basis_form_preserved(m, fields, options)
        for k, flag in enumerate(flags, start=1):
            if not flag:
                report.fail(f"image of Q{k} under the member leaves the span on {_chart_name(chart)}")
        preserved.extend(flags)
    report.target_ok = all(preserved)


def _verify_subgroup(entry, table, options, generic, chart_index, report):
    charts = _select(entry.chart_list(table), chart_index)
    _check_closure_and_label(entry, entry.fields(table), table, charts[0], options, generic, report)
    _check_member(entry, table, options, chart_index, report, entry.member)
    alt = entry.alternates
    if "map" in alt:
        member = (alt["map"], alt.get("inverse", entry.member[1]))
        report.errata.extend(
            _check_alternate(entry, lambda scratch: _check_member(entry, table, options, chart_index, scratch, member))
        )


def verify_entry(
    entry: CatalogEntry,
    prelude=(),
    options: ZeroTestOptions = DEFAULT_OPTIONS,
    generic_values: dict | None = None,
    chart_index: int | None = None,
) -> VerificationReport:
    """
    Verify one catalog entry.

    Parameters
    ----------
    entry : CatalogEntry
        Loaded entry.
    prelude : tuple of str, optional
        Declarations the entry's table starts from.
    options : ZeroTestOptions, optional
        Zero-test seed and sample count.
    generic_values : dict, optional
        Parameter values for classification; the entry's ``values`` win.
    chart_index : int, optional
        Restrict to one chart alternative, 1-based.

    Returns
    -------
    VerificationReport
        For realizations: closure, label and the invariance residual of
        every basis field on every chart. Genericity assumptions are not
        checked. Errors are recorded in ``error``, never raised.
    """
    if not isinstance(entry, CatalogEntry):
        raise TypeError(f"Expected type of entry is CatalogEntry. Got {type(entry)}.")
    report = VerificationReport(entry.id, entry.kind)
    start = time.perf_counter()
    generic = _generic(entry, generic_values)
    try:
        if entry.kind == "abstract":
            _verify_abstract(entry, options, generic, report)
        else:
            table = entry.table(prelude)
            if entry.kind in ("realization", "symmetry-list"):
                _verify_realization(entry, table, options, generic, chart_index, report)
            elif entry.kind in ("reduction", "linearization"):
                _verify_chain(entry, table, options, chart_index, report)
            elif entry.kind == "subgroup":
                _verify_subgroup(entry, table, options, generic, chart_index, report)
    except (LieHeatError, ArithmeticError) as e:
        report.error = e.message if isinstance(e, LieHeatError) else f"{type(e).__name__}: {e}"
    report.elapsed = time.perf_counter() - start
    logger.info("%s: %s", entry.id, "pass" if report.passed else "fail")
    return report


def _verify_worker(args) -> VerificationReport:
    entry, prelude, options, generic_values, chart_index = args
    return verify_entry(entry, prelude, options, generic_values, chart_index)


def _census_errata(entries, claim: dict) -> list:
    counts = census(entries)
    found = []
    for dim, claimed in sorted(claim.items()):
        computed = counts.get(dim, 0)
        if computed != claimed:
            found.append(ErrataRecord("census", f"dim {dim}", str(claimed), str(computed)))
    return found


def verify_all(
    entries,
    prelude=(),
    options: ZeroTestOptions = DEFAULT_OPTIONS,
    generic_values: dict | None = None,
    errata: dict | None = None,
    jobs: int = 1,
    census_claim: dict | None = None,
    chart_index: int | None = None,
) -> VerificationSummary:
    """
    Verify a list of entries and weigh the failures against the ledger.

    A failing entry is tolerated when all its checks pass and each errata
    note it raised is listed in ``errata``. A listed entry that raises no
    note is reported as resolved. Any other failure is unexpected.

    Parameters
    ----------
    entries : list of CatalogEntry
        Entries to verify.
    prelude : tuple of str, optional
        Declarations every entry starts from.
    options : ZeroTestOptions, optional
        Zero-test seed and sample count, the same for every entry.
    generic_values : dict, optional
        Parameter values for classification.
    errata : dict, optional
        Ledger from `load_errata`.
    jobs : int, optional
        Worker processes. Reports do not depend on it.
    census_claim : dict, optional
        Published class counts by dimension, compared with `census`.
    chart_index : int, optional
        Restrict every entry to one chart alternative.

    Returns
    -------
    VerificationSummary
        Reports ordered by entry id.
    """
    ledger = dict(errata or {})
    work = sorted(entries, key=lambda e: e.id)
    arguments = [(e, tuple(prelude), options, generic_values, chart_index) for e in work]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_verify_worker, arguments))
    else:
        reports = [_verify_worker(a) for a in arguments]

    summary = VerificationSummary(reports=reports, census=census(work), census_claim=dict(census_claim or {}))
    for report in reports:
        listed = [record for key, record in ledger.items() if key[0] == report.entry_id]
        raised = {record.key for record in report.errata}
        for record in listed:
            if record.key not in raised:
                logger.warning("%s (%s) is listed in the errata ledger but no longer fails", *record.key)
                summary.resolved.append(replace(record, status="resolved"))
        if report.passed:
            continue
        if report.checks_ok and raised <= set(ledger):
            for record in report.errata:
                known = ledger[record.key]
                logger.warning("%s: tolerated errata %s", report.entry_id, record.variant)
                summary.tolerated.append(replace(record, status=known.status, note=known.note))
            continue
        summary.unexpected.append(report.entry_id)

    if census_claim:
        for record in _census_errata(work, census_claim):
            if record.key in ledger:
                known = ledger[record.key]
                logger.warning("census %s: tolerated errata", record.variant)
                summary.tolerated.append(replace(record, status=known.status, note=known.note))
            else:
                summary.unexpected.append("census")
    logger.info("%s", summary.headline())
    return summary
