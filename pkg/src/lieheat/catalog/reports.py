"""
Verification reports, the errata ledger and the JSON report format.
"""

import json
import logging
from dataclasses import dataclass, field
from functools import cache

from jsonschema import Draft202012Validator

from lieheat.utils import CatalogError, LieHeatError, _read_yaml, package_path

logger = logging.getLogger(__name__)

STATUSES = ("confirmed-discrepancy", "resolved", "open")
_SCHEMA_PATH = package_path("catalog/data/report.schema.json")


@dataclass(frozen=True)
class ErrataRecord:
    """
    A published claim that independent recomputation contradicts.

    Attributes
    ----------
    entry_id : str
        Catalog entry, or ``census`` for the class count.
    variant : str
        Part of the entry the claim belongs to: ``alt`` for the published
        variant of a row, ``step N`` for a reduction target, ``dim N`` for
        a census count.
    claim : str
        The claim as published.
    computed : str
        The independently computed value.
    status : str
        One of `STATUSES`.
    note : str
        Free text.
    """

    entry_id: str
    variant: str
    claim: str
    computed: str
    status: str = "open"
    note: str = ""

    def __post_init__(self):
        for name in ("entry_id", "variant", "claim", "computed"):
            if not str(getattr(self, name)).strip():
                raise LieHeatError(f"errata record field '{name}' is empty")
        if self.status not in STATUSES:
            raise LieHeatError(f"errata status must be one of {', '.join(STATUSES)}. Got '{self.status}'")

    @property
    def key(self) -> tuple:
        return self.entry_id, self.variant

    def to_dict(self) -> dict:
        return {
            "entry": self.entry_id,
            "variant": self.variant,
            "claim": self.claim,
            "computed": self.computed,
            "status": self.status,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    """
    Outcome of verifying one catalog entry.

    A flag is None when the check does not apply to the entry's kind. The
    entry passes iff no flag is False, no error occurred and no errata note
    was raised.

    Attributes
    ----------
    entry_id : str
        Catalog entry.
    kind : str
        Entry kind.
    closure_ok : bool or None
        The basis spans a Lie algebra (for abstract records: Jacobi holds).
    label_ok : bool or None
        The computed label agrees with the expected one.
    residual_zero : dict
        Chart text to one flag per checked operator.
    target_ok : bool or None
        Computed reduction targets or subgroup images are as expected.
    label : str
        Computed label or fingerprint description.
    errata : list of ErrataRecord
        Published claims found to be wrong.
    failures : list of str
        Diagnostics of failed checks, residuals as monomial systems.
    error : str
        Message of an error that stopped the verification.
    elapsed : float
        Wall time in seconds.
    """

    entry_id: str
    kind: str
    closure_ok: bool | None = None
    label_ok: bool | None = None
    residual_zero: dict = field(default_factory=dict)
    target_ok: bool | None = None
    label: str = ""
    errata: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    error: str = ""
    elapsed: float = 0.0

    @property
    def checks_ok(self) -> bool:
        flags = [self.closure_ok, self.label_ok, self.target_ok]
        flags += [flag for values in self.residual_zero.values() for flag in values]
        return not self.error and all(flag is not False for flag in flags)

    @property
    def passed(self) -> bool:
        return self.checks_ok and not self.errata

    def fail(self, message: str):
        logger.debug("%s: %s", self.entry_id, message)
        self.failures.append(message)

    def to_dict(self, timing: bool = False) -> dict:
        document = {
            "id": self.entry_id,
            "kind": self.kind,
            "passed": self.passed,
            "closure_ok": self.closure_ok,
            "label_ok": self.label_ok,
            "residual_zero": {chart: list(flags) for chart, flags in self.residual_zero.items()},
            "target_ok": self.target_ok,
            "label": self.label,
            "errata": [record.to_dict() for record in self.errata],
            "failures": list(self.failures),
            "error": self.error,
        }
        if timing:
            document["elapsed"] = round(self.elapsed, 3)
        return document


@dataclass
class VerificationSummary:
    """
    Aggregated outcome of a catalog run.

    Attributes
    ----------
    reports : list of VerificationReport
        One report per entry, ordered by entry id.
    tolerated : list of ErrataRecord
        Errata listed in the ledger, with the ledger's status.
    unexpected : list of str
        Ids of entries that failed without a ledger record.
    resolved : list of ErrataRecord
        Ledger records whose entry now passes.
    census : dict
        Counted realizations by dimension.
    census_claim : dict
        Published counts, empty if not compared.
    """

    reports: list = field(default_factory=list)
    tolerated: list = field(default_factory=list)
    unexpected: list = field(default_factory=list)
    resolved: list = field(default_factory=list)
    census: dict = field(default_factory=dict)
    census_claim: dict = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        return 1 if self.unexpected else 0

    @property
    def passed(self) -> list:
        return [r.entry_id for r in self.reports if r.passed]

    def headline(self) -> str:
        if not self.unexpected and not self.tolerated:
            return f"all entries pass ({len(self.reports)} checked)"
        return (
            f"{len(self.passed)} passed, {len(self.unexpected)} failed, "
            f"{len(self.tolerated)} errata tolerated ({len(self.reports)} checked)"
        )

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "schema": "lieheat-report/1",
            "summary": {
                "checked": len(self.reports),
                "passed": len(self.passed),
                "unexpected": list(self.unexpected),
                "errata": len(self.tolerated),
                "resolved": [record.to_dict() for record in self.resolved],
                "exit_code": self.exit_code,
            },
            "census": {str(k): v for k, v in self.census.items()},
            "census_claim": {str(k): v for k, v in self.census_claim.items()},
            "errata": [record.to_dict() for record in self.tolerated],
            "reports": [report.to_dict(timing) for report in self.reports],
        }


def load_errata(path) -> dict:
    """
    Read the errata ledger.

    The YAML document has a top-level ``ERRATA`` list of mappings with the
    keys ``entry``, ``variant``, ``claim``, ``computed``, ``status`` and
    optionally ``note``.

    Returns
    -------
    dict
        ``(entry_id, variant)`` to `ErrataRecord`.

    Raises
    ------
    CatalogError
        If a record is malformed or listed twice.
    """
    document = _read_yaml(str(path))
    records = {}
    for position, item in enumerate(document.get("ERRATA") or [], start=1):
        if not isinstance(item, dict):
            raise CatalogError(f"errata record {position} in {path} is not a mapping")
        try:
            record = ErrataRecord(
                str(item.get("entry", "")),
                str(item.get("variant", "")),
                str(item.get("claim", "")),
                str(item.get("computed", "")),
                str(item.get("status", "open")),
                str(item.get("note", "")),
            )
        except LieHeatError as e:
            raise CatalogError(f"errata record {position} in {path}: {e.message}") from e
        if record.key in records:
            raise CatalogError(f"errata record {position} in {path} is listed twice", record.entry_id)
        records[record.key] = record
    logger.debug("read %d errata records from %s", len(records), path)
    return records


@cache
def _report_validator() -> Draft202012Validator:
    with open(_SCHEMA_PATH, "r", encoding="utf-8") as file:
        schema = json.load(file)
    return Draft202012Validator(schema)


def validate_report(document: dict) -> list:
    """Schema violations of a JSON report, as ``path: message`` strings."""
    errors = []
    for e in sorted(_report_validator().iter_errors(document), key=str):
        errors.append(f"{list(e.absolute_path)}: {e.message}")
    return errors


def render_json(document: dict) -> str:
    """Serialize a report document after validating it against the shipped schema."""
    errors = validate_report(document)
    if errors:
        raise LieHeatError(f"report does not match its schema: {'; '.join(errors)}")
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False)


def render_text(summary: VerificationSummary) -> str:
    lines = []
    tolerated = {record.entry_id for record in summary.tolerated}
    for report in summary.reports:
        if report.passed:
            lines.append(f"PASS    {report.entry_id}")
            continue
        status = "ERRATA" if report.entry_id in tolerated and report.checks_ok else "FAIL"
        lines.append(f"{status:<8}{report.entry_id}")
        if report.error:
            lines.append(f"        error: {report.error}")
        lines.extend(f"        {failure}" for failure in report.failures)
        lines.extend(
            f"        {record.variant}: claimed {record.claim}, computed {record.computed}"
            for record in report.errata
        )
    if summary.census:
        counts = ", ".join(f"{dim}: {count}" for dim, count in summary.census.items())
        lines.append(f"census  {counts}")
    for record in summary.resolved:
        lines.append(f"RESOLVED {record.entry_id} ({record.variant}) is listed in the ledger but passes")
    lines.append(summary.headline())
    return "\n".join(lines)
