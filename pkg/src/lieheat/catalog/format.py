"""
Reading and writing catalog documents.

A catalog is a line-oriented UTF-8 text::

    schema = lieheat-catalog/1
    census = 3, 7, 28, 12

    [entry T1.A3_2.3]
    kind = realization
    basis = -2*t*dt - x*dx; dx; sqrt(abs(t))*dx + du
    let = omega := t*u_x^2
    F = -1/2*t^(-1)*u*sqrt(abs(omega)) + t^(-1)*G(omega)
    charts = t > 0, u_x > 0 | t < 0, u_x > 0
    label = A_{3.2}

Lines starting with ``#`` are comments and an indented line continues the
value of the previous key. Expressions use the parser grammar. The keys a
block may carry depend on its ``kind``; see `KINDS`.
"""

import json
import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path

import sympy as sp

from lieheat.algebra import StructureConstants, structure_constants
from lieheat.equiv import parse_components
from lieheat.expr import EMPTY_CHART, SymbolTable, default_table, localize, normalize
from lieheat.parser import (
    SourceSpan,
    lower_text,
    parse_charts,
    parse_field,
    parse_rule,
    split_top_level,
)
from lieheat.utils import CatalogError, LieHeatError

logger = logging.getLogger(__name__)

SCHEMA = "lieheat-catalog/1"

KINDS = {
    "realization": {"basis", "F"},
    "abstract": {"dim", "relations"},
    "symmetry-list": {"basis", "F"},
    "linearization": {"F", "step"},
    "reduction": {"F", "step"},
    "subgroup": {"basis", "map", "inverse"},
}

_SINGLE = {
    "kind",
    "basis",
    "F",
    "charts",
    "label",
    "census",
    "dim",
    "relations",
    "params",
    "map",
    "note",
    "alt-basis",
    "alt-F",
    "alt-charts",
    "alt-map",
    "alt-inverse",
    "alt-claim",
}
_REPEATED = {"declare", "rule", "let", "values", "assume", "infinite", "step", "inverse", "claim", "expect"}
_STEP_KEYS = {"inverse", "claim", "expect"}


@dataclass(frozen=True)
class Step:
    """
    One transformation of a reduction chain.

    Attributes
    ----------
    kind : str
        ``sub`` for a change of the dependent variable ``u = phi(t, x, v)``,
        ``map`` for a point map of the equivalence group.
    text : str
        Substitution or forward map text.
    inverse : str
        Inverse map text, required for ``map`` steps.
    claim : str
        Right-hand side of the target equation as published; may be wrong.
    expect : str
        Right-hand side the computed target must equal.
    """

    kind: str
    text: str
    inverse: str = ""
    claim: str = ""
    expect: str = ""


@dataclass(frozen=True)
class CatalogEntry:
    """
    One catalog record.

    Attributes
    ----------
    id : str
        Unique identifier such as ``T2.A3_9.2``.
    kind : str
        One of `KINDS`.
    basis : tuple of str
        Vector fields in the parser grammar.
    F : str
        Right-hand side of ``u_t = u_xx + F``.
    lets : tuple of (str, str)
        Abbreviations usable in ``F`` and the claims, in definition order.
    charts : str
        Chart alternatives joined by ``|``; empty for the unrestricted chart.
    label : str
        Expected algebra label, parameter values may be parameter names.
    declarations : tuple of str
        Declarations added to the prelude, replacing prelude lines that
        declare the same name.
    rules : tuple of str
        Side conditions as rewrite rules.
    values : dict
        Generic values of parameters, by name.
    assumptions : tuple of str
        Genericity conditions. They are recorded, never checked.
    census : bool
        Whether the entry counts in the per-dimension census.
    infinite : tuple of str
        Operators with arbitrary functions that are only checked for
        invariance.
    steps : tuple of Step
        Reduction chain.
    dim : int
        Dimension of an abstract record.
    relations : str
        Commutation relations of an abstract record.
    params : tuple of str
        Parameters of the relations.
    instances : tuple of dict
        Parameter values at which the relations are also checked.
    member : tuple of (str, str)
        Forward and inverse text of a concrete subgroup member.
    alternates : dict
        ``alt-*`` keys with the published variant of the data.
    note : str
        Provenance.
    items : tuple of (str, str)
        Key and value pairs as written, for `dump_json`.
    span : SourceSpan
        Location of the block header.
    """

    id: str
    kind: str
    basis: tuple = ()
    F: str = ""
    lets: tuple = ()
    charts: str = ""
    label: str = ""
    declarations: tuple = ()
    rules: tuple = ()
    values: dict = field(default_factory=dict)
    assumptions: tuple = ()
    census: bool = False
    infinite: tuple = ()
    steps: tuple = ()
    dim: int = 0
    relations: str = ""
    params: tuple = ()
    instances: tuple = ()
    member: tuple = ()
    alternates: dict = field(default_factory=dict)
    note: str = ""
    items: tuple = ()
    span: SourceSpan | None = field(default=None, compare=False)

    @property
    def dimension(self) -> int:
        return self.dim if self.kind == "abstract" else len(self.basis)

    def table(self, prelude=()) -> SymbolTable:
        """Symbol table of the entry: the prelude, its declarations and its rules."""
        table = default_table(prelude, self.declarations)
        for rule in self.rules:
            table.add_rule(parse_rule(rule, table, f"{self.id}: {rule}"))
        return table

    def expression(self, text: str, table: SymbolTable) -> sp.Expr:
        """Lower ``text`` with the entry's abbreviations in scope."""
        scope = {}
        for name, definition in self.lets:
            scope[name] = lower_text(definition, table, scope)
        return normalize(localize(lower_text(text, table, scope), table), table)

    def fields(self, table: SymbolTable, basis=None) -> list:
        return [parse_field(text, table) for text in (self.basis if basis is None else basis)]

    def chart_list(self, table: SymbolTable, charts: str | None = None) -> list:
        return parse_charts(self.charts if charts is None else charts, table)

    def structure(self) -> StructureConstants:
        """Commutation relations of an abstract record, Jacobi identity unchecked."""
        return StructureConstants.from_relations(self.dim, self.relations, self.params, checked=False)


@dataclass(frozen=True)
class Catalog:
    """
    A parsed catalog document.

    Attributes
    ----------
    entries : tuple of CatalogEntry
        Records in file order.
    schema : str
        Schema header.
    census_claim : dict
        Published number of equation classes by dimension, if given.
    path : str
        Source file.
    """

    entries: tuple = ()
    schema: str = SCHEMA
    census_claim: dict = field(default_factory=dict)
    path: str = ""


def _span(text: str, offset: int) -> SourceSpan:
    return SourceSpan.of(text, offset)


def _logical_lines(text: str):
    """Yield ``(offset, line)`` with continuation lines joined."""
    current = None
    offset = 0
    for raw in text.splitlines(keepends=True):
        line = raw.rstrip("\r\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            offset += len(raw)
            continue
        if line[0] in " \t":
            if current is None:
                raise CatalogError("continuation line without a key", span=_span(text, offset))
            current = (current[0], f"{current[1]} {stripped}")
        else:
            if current is not None:
                yield current
            current = (offset, stripped)
        offset += len(raw)
    if current is not None:
        yield current


def _split_blocks(text: str):
    header = []
    blocks = []
    for offset, line in _logical_lines(text):
        if line.startswith("["):
            if not (line.endswith("]") and line[1:].startswith("entry ")):
                raise CatalogError(f"malformed block header '{line}'", span=_span(text, offset))
            entry_id = line[len("[entry ") : -1].strip()
            if not entry_id:
                raise CatalogError("block header without an id", span=_span(text, offset))
            blocks.append((entry_id, offset, []))
            continue
        key, equals, value = line.partition("=")
        if not equals:
            where = blocks[-1][0] if blocks else None
            raise CatalogError(f"expected 'key = value'. Got '{line}'", where, _span(text, offset))
        item = (key.strip(), value.strip(), offset)
        (blocks[-1][2] if blocks else header).append(item)
    return header, blocks


def _read_header(header: list, text: str) -> tuple:
    schema, census = None, {}
    for key, value, offset in header:
        if key == "schema":
            schema = value
        elif key == "census":
            try:
                counts = [int(v) for v in value.split(",")]
            except ValueError as e:
                raise CatalogError(f"census must list integers. Got '{value}'", span=_span(text, offset)) from e
            census = {dim: count for dim, count in enumerate(counts, start=1)}
        else:
            raise CatalogError(f"unknown header key '{key}'", span=_span(text, offset))
    return schema, census


def _values(text: str) -> dict:
    values = {}
    for part in split_top_level(text, ","):
        if not part.strip():
            continue
        name, colon, value = part.partition(":")
        if not colon:
            raise LieHeatError(f"values read 'name: value'. Got '{part.strip()}'")
        values[name.strip()] = value.strip()
    return values


def _step(value: str) -> Step:
    kind, _, body = value.partition(" ")
    if kind not in ("sub", "map") or not body.strip():
        raise LieHeatError(f"step reads 'sub u = ...' or 'map t -> ..., x -> ..., u -> ...'. Got '{value}'")
    return Step(kind, body.strip())


def _build_entry(entry_id: str, offset: int, items: list, text: str) -> CatalogEntry:
    span = _span(text, offset)
    kind = next((value for key, value, _ in items if key == "kind"), None)
    if kind is None:
        raise CatalogError("entry has no kind", entry_id, span)
    if kind not in KINDS:
        raise CatalogError(f"unknown kind '{kind}', expected one of {', '.join(KINDS)}", entry_id, span)
    data = {"declarations": [], "rules": [], "lets": [], "assumptions": [], "infinite": [], "instances": []}
    steps = []
    alternates = {}
    seen = set()
    for key, value, item_offset in items:
        where = _span(text, item_offset)
        if key not in _SINGLE and key not in _REPEATED:
            raise CatalogError(f"unknown key '{key}'", entry_id, where)
        if key in _SINGLE:
            if key in seen:
                raise CatalogError(f"key '{key}' given twice", entry_id, where)
            seen.add(key)
        try:
            if key.startswith("alt-"):
                alternates[key[4:]] = value
            elif key == "declare":
                data["declarations"].extend(p.strip() for p in value.split(";") if p.strip())
            elif key == "rule":
                data["rules"].append(value)
            elif key == "let":
                name, assign, definition = value.partition(":=")
                if not assign or not name.strip().isidentifier():
                    raise LieHeatError(f"let reads 'name := expression'. Got '{value}'")
                data["lets"].append((name.strip(), definition.strip()))
            elif key == "values":
                values = _values(value)
                data.setdefault("values", values)
                data["instances"].append(values)
            elif key == "assume":
                data["assumptions"].append(value)
            elif key == "infinite":
                data["infinite"].append(value)
            elif key == "step":
                steps.append(_step(value))
            elif key in _STEP_KEYS and kind != "subgroup":
                if not steps:
                    raise LieHeatError(f"'{key}' must follow a step")
                if getattr(steps[-1], key):
                    raise LieHeatError(f"step already has '{key}'")
                steps[-1] = replace(steps[-1], **{key: value})
            elif key == "inverse":
                if "inverse" in data:
                    raise LieHeatError("key 'inverse' given twice")
                data["inverse"] = value
            elif key == "basis":
                data["basis"] = tuple(p.strip() for p in value.split(";") if p.strip())
            elif key == "census":
                if value not in ("yes", "no"):
                    raise LieHeatError(f"census is 'yes' or 'no'. Got '{value}'")
                data["census"] = value == "yes"
            elif key == "dim":
                data["dim"] = int(value)
            elif key == "params":
                data["params"] = tuple(p.strip() for p in value.split(",") if p.strip())
            elif key == "kind":
                continue
            else:
                data[key] = value
        except (LieHeatError, ValueError) as e:
            message = e.message if isinstance(e, LieHeatError) else str(e)
            raise CatalogError(message, entry_id, where) from e

    present = {key for key, _, _ in items}
    missing = sorted(KINDS[kind] - present)
    if missing:
        raise CatalogError(f"{kind} entry needs {', '.join(missing)}", entry_id, span)
    for step in steps:
        if step.kind == "map" and not step.inverse:
            raise CatalogError("map step needs an inverse", entry_id, span)

    member = ()
    if kind == "subgroup":
        member = (data.pop("map"), data.pop("inverse"))
    data.pop("inverse", None)
    return CatalogEntry(
        id=entry_id,
        kind=kind,
        basis=data.get("basis", ()),
        F=data.get("F", ""),
        lets=tuple(data["lets"]),
        charts=data.get("charts", ""),
        label=data.get("label", ""),
        declarations=tuple(data["declarations"]),
        rules=tuple(data["rules"]),
        values=data.get("values", {}),
        assumptions=tuple(data["assumptions"]),
        census=data.get("census", False),
        infinite=tuple(data["infinite"]),
        steps=tuple(steps),
        dim=data.get("dim", 0),
        relations=data.get("relations", ""),
        params=data.get("params", ()),
        instances=tuple(data["instances"]),
        member=member,
        alternates=alternates,
        note=data.get("note", ""),
        items=tuple((key, value) for key, value, _ in items),
        span=span,
    )


def validate(entry: CatalogEntry, prelude=()):
    """
    Structural validation of one entry.

    Every expression must parse against the entry's declarations, and the
    basis of a realization or symmetry list must close under the bracket on
    its first chart. The published ``alt-*`` variants are only parsed.

    Raises
    ------
    CatalogError
        With the entry id and the span of its header.
    """
    try:
        if entry.kind == "abstract":
            entry.structure()
            return
        table = entry.table(prelude)
        charts = entry.chart_list(table)
        fields = entry.fields(table)
        if entry.F:
            entry.expression(entry.F, table)
        for text in entry.infinite:
            parse_field(text, table)
        for key in ("F", "claim"):
            if key in entry.alternates:
                entry.expression(entry.alternates[key], table)
        if "basis" in entry.alternates:
            entry.fields(table, tuple(p.strip() for p in entry.alternates["basis"].split(";")))
        if "charts" in entry.alternates:
            entry.chart_list(table, entry.alternates["charts"])
        for step in entry.steps:
            for text in (step.claim, step.expect):
                if text:
                    entry.expression(text, table)
        if entry.member:
            for text in entry.member:
                parse_components(text, table)
        if entry.kind in ("realization", "symmetry-list") and fields:
            structure_constants(fields, table, charts[0] if charts else EMPTY_CHART)
    except LieHeatError as e:
        raise CatalogError(e.message, entry.id, entry.span) from e


def parse_catalog(text: str, path: str = "", prelude=(), check: bool = True) -> Catalog:
    """
    Parse catalog ``text``.

    Parameters
    ----------
    text : str
        Catalog document.
    path : str, optional
        Source name for messages.
    prelude : tuple of str, optional
        Declarations every entry starts from.
    check : bool, optional
        Run `validate` on every entry. Default is True.

    Raises
    ------
    CatalogError
        On a schema mismatch, a malformed block, a duplicate id or an entry
        failing validation.
    """
    header, blocks = _split_blocks(text)
    schema, census = _read_header(header, text)
    if not blocks and schema is None:
        return Catalog(path=path)
    if schema != SCHEMA:
        raise CatalogError(f"unsupported schema '{schema}' in {path or 'catalog'}, expected '{SCHEMA}'")

    entries = []
    seen = set()
    for entry_id, offset, items in blocks:
        if entry_id in seen:
            raise CatalogError("duplicate entry id", entry_id, _span(text, offset))
        seen.add(entry_id)
        entry = _build_entry(entry_id, offset, items, text)
        if check:
            validate(entry, prelude)
        entries.append(entry)
    logger.info("loaded %d catalog entries from %s", len(entries), path or "text")
    return Catalog(tuple(entries), schema, census, path)


def read_catalog(path, prelude=(), check: bool = True) -> Catalog:
    """
    Read a catalog file, see `parse_catalog`.

    Raises
    ------
    TypeError
        If ``path`` is not a string or path-like object.
    FileNotFoundError
        If the file does not exist.
    """
    if not isinstance(path, (str, Path)):
        raise TypeError(f"Expected type of path is str. Got {type(path)}.")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise FileNotFoundError(f"Error: File '{path}' not found") from e
    return parse_catalog(text, str(path), prelude, check)


def load(path, prelude=(), check: bool = True) -> list:
    """Entries of the catalog file at ``path``."""
    return list(read_catalog(path, prelude, check).entries)


def dump_json(entries, schema: str = SCHEMA) -> str:
    """JSON mirror of the entries: ids, kinds and the key-value pairs as written."""
    document = {
        "schema": schema,
        "entries": [
            {"id": e.id, "kind": e.kind, "fields": [{"key": k, "value": v} for k, v in e.items]}
            for e in entries
        ],
    }
    return json.dumps(document, indent=2, ensure_ascii=False)


def census(entries) -> dict:
    """Number of counted realizations by algebra dimension."""
    counts = Counter(e.dimension for e in entries if e.kind == "realization" and e.census)
    return dict(sorted(counts.items()))
