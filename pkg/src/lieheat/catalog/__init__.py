from lieheat.catalog.format import (
    KINDS,
    SCHEMA,
    Catalog,
    CatalogEntry,
    Step,
    census,
    dump_json,
    load,
    parse_catalog,
    read_catalog,
    validate,
)
from lieheat.catalog.reports import (
    STATUSES,
    ErrataRecord,
    VerificationReport,
    VerificationSummary,
    load_errata,
    render_json,
    render_text,
    validate_report,
)
from lieheat.catalog.verify import (
    verify_all,
    verify_entry,
    verify_reduction,
    verify_symmetry_listing,
)

__all__ = [
    "KINDS",
    "SCHEMA",
    "Catalog",
    "CatalogEntry",
    "Step",
    "census",
    "dump_json",
    "load",
    "parse_catalog",
    "read_catalog",
    "validate",
    "STATUSES",
    "ErrataRecord",
    "VerificationReport",
    "VerificationSummary",
    "load_errata",
    "render_json",
    "render_text",
    "validate_report",
    "verify_all",
    "verify_entry",
    "verify_reduction",
    "verify_symmetry_listing",
]
