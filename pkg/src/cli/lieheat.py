"""
Command-line interface of the symmetry verification engine.

The ``verify`` subcommand replays the shipped catalog (or any catalog file),
the other subcommands expose single computations: the invariance residual
of a field, a commutator, the classification of a span of fields or of
commutation relations, the change of variables in an equation and the
census of equation classes.

Exit codes are 0 on success, 1 when a check fails and 2 on input, I/O or
schema errors.
"""

import argparse
import fnmatch
import logging
import sys
from argparse import Namespace
from pathlib import Path

import yaml

from lieheat.algebra import REGISTRY, StructureConstants, classify, lookup, structure_constants
from lieheat.catalog import census, load_errata, read_catalog, render_json, render_text, verify_all
from lieheat.equiv import parse_map, parse_substitution, substitute_dependent, transform_pde
from lieheat.expr import ZeroTestOptions, default_table, localize
from lieheat.fields import commutator, invariance_residual
from lieheat.parser import parse_charts, parse_expr, parse_field, print_expr, print_field
from lieheat.utils import LieHeatError, NotClosedError, SplitError, load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

RESULT_SCHEMA = "lieheat-result/1"

CENSUS_NOTE = (
    "The T1 and T2 groups hold 8 + 20 three-dimensional rows; the 28 counted "
    "classes match the published total. A count of 26 (8 + 18) omits two rows "
    "of the T2 group."
)


def _configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"seed must be an integer. Got '{text}'") from e
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must satisfy 0 <= seed < 2**64. Got {value}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer. Got {value}")
    return value


def _result(command: str, code: int, result: dict) -> dict:
    return {"schema": RESULT_SCHEMA, "command": command, "exit_code": code, "result": result}


def _emit(args: Namespace, command: str, code: int, result: dict, lines: list) -> int:
    if args.format == "json":
        print(render_json(_result(command, code, result)))
    else:
        print("\n".join(lines))
    return code


def _context(args: Namespace):
    settings = load_settings(args.config).with_seed(args.seed)
    table = default_table(settings.prelude, tuple(args.declare or ()))
    return settings, table, ZeroTestOptions.from_settings(settings)


def _selected(entry_id: str, patterns) -> bool:
    if not patterns:
        return True
    return any(fnmatch.fnmatchcase(entry_id, pattern) for pattern in patterns)


def cmd_verify(args: Namespace) -> int:
    """
    Verify the entries of a catalog against the errata ledger.

    Returns
    -------
    int
        0 if every failure is a listed erratum, 1 otherwise.
    """
    settings = load_settings(args.config).with_seed(args.seed)
    path = Path(args.catalog) if args.catalog else settings.catalog
    catalog = read_catalog(path, settings.prelude)
    entries = [e for e in catalog.entries if _selected(e.id, args.only)]
    errata = load_errata(Path(args.errata) if args.errata else settings.errata)
    logger.info("verifying %d of %d entries from %s", len(entries), len(catalog.entries), path)

    summary = verify_all(
        entries,
        settings.prelude,
        ZeroTestOptions.from_settings(settings),
        settings.generic_values,
        errata,
        jobs=args.jobs or settings.jobs,
        census_claim=None if args.only else catalog.census_claim,
        chart_index=args.chart,
    )
    if args.format == "json":
        print(render_json(summary.to_dict(args.timing)))
    else:
        print(render_text(summary))
    return summary.exit_code


def _system(residual, table) -> list:
    try:
        system = residual.monomial_system()
    except SplitError:
        return []
    return [{"monomial": print_expr(m, table), "coefficient": print_expr(c, table)} for m, c in system]


def cmd_residual(args: Namespace) -> int:
    """
    Print the invariance residual of ``--field`` for ``u_t = u_xx + --pde``.

    The residual is printed per chart together with its split by the jet
    monomials it is polynomial in.

    Returns
    -------
    int
        0 if the residual vanishes on every chart, 1 otherwise.
    """
    settings, table, options = _context(args)
    q = parse_field(args.field, table, settings.max_exponent)
    F = parse_expr(args.pde, table, settings.max_exponent)
    charts = parse_charts(args.chart, table)

    code = EXIT_OK
    rows, lines = [], []
    for chart in charts:
        residual = invariance_residual(q, F, table, chart, options)
        zero = bool(residual.is_zero(options))
        if not zero:
            code = EXIT_FAIL
        printed = "0" if zero else print_expr(residual.expr, table)
        system = [] if zero else _system(residual, table)
        rows.append({"chart": chart.text, "residual": printed, "zero": zero, "system": system})
        prefix = f"[{chart}] " if len(charts) > 1 else ""
        lines.append(f"{prefix}{printed}")
        lines.extend(f"    [{row['monomial']}] {row['coefficient']}" for row in system)
    result = {"field": print_field(q, table), "pde": print_expr(F, table), "charts": rows}
    return _emit(args, "residual", code, result, lines)


def cmd_commutator(args: Namespace) -> int:
    """Print ``[Q1, Q2]`` in the field syntax."""
    settings, table, _ = _context(args)
    chart = parse_charts(args.chart, table)[0]
    q1, q2 = (
        parse_field(text, table, settings.max_exponent).map(lambda c: localize(c, table, chart))
        for text in (args.first, args.second)
    )
    printed = print_field(commutator(q1, q2, table).normalized(table), table)
    result = {"first": print_field(q1, table), "second": print_field(q2, table), "commutator": printed}
    return _emit(args, "commutator", EXIT_OK, result, [printed])


def _basis_lines(text: str) -> list:
    fields = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        fields.extend(part.strip() for part in line.split(";") if part.strip())
    return fields


def _values(pairs) -> dict:
    values = {}
    for pair in pairs or ():
        name, equals, value = pair.partition("=")
        if not equals or not name.strip():
            raise LieHeatError(f"values read 'name=value'. Got '{pair}'")
        values[name.strip()] = value.strip()
    return values


def cmd_classify(args: Namespace) -> int:
    """
    Classify a span of vector fields or an algebra given by relations.

    Returns
    -------
    int
        0 if a single registry algebra matches, 1 if the span does not
        close or the invariants leave the algebra unidentified or ambiguous.
    """
    settings, table, options = _context(args)
    generic = {**settings.generic_values, **_values(args.value)}
    if args.relations:
        if not args.dim:
            raise LieHeatError("--relations needs --dim")
        c = StructureConstants.from_relations(args.dim, args.relations, tuple(sorted(_values(args.value))))
        source = {"relations": args.relations, "dim": args.dim}
    else:
        if args.basis:
            texts = _basis_lines(Path(args.basis).read_text(encoding="utf-8"))
        else:
            texts = _basis_lines(args.fields or "")
        if not texts:
            raise LieHeatError("give a basis with --basis FILE or --fields TEXT, or --relations")
        fields = [parse_field(text, table, settings.max_exponent) for text in texts]
        chart = parse_charts(args.chart, table)[0]
        source = {"basis": [print_field(q, table) for q in fields]}
        try:
            c = structure_constants(fields, table, chart, options)
        except NotClosedError as e:
            outside = print_field(e.residual, table) if e.residual is not None else ""
            message = f"not closed: {e.message}{': ' + outside if outside else ''}"
            return _emit(args, "classify", EXIT_FAIL, {**source, "closed": False, "message": message}, [message])

    fingerprint = classify(c, generic)
    text = fingerprint.describe()
    if fingerprint.label is not None and fingerprint.label.name in REGISTRY:
        description = lookup(fingerprint.label.name).description
        if description:
            label, _, rest = text.partition(";")
            text = f"{label} ({description});{rest}"
    code = EXIT_OK if fingerprint.label is not None else EXIT_FAIL
    result = {
        **source,
        "closed": True,
        "label": str(fingerprint.label) if fingerprint.label is not None else None,
        "candidates": list(fingerprint.candidates),
        "derived_series": list(fingerprint.derived_series),
        "lower_central_series": list(fingerprint.lower_central_series),
        "center_dim": fingerprint.center_dim,
        "nilradical_dim": fingerprint.nilradical_dim,
        "killing_signature": list(fingerprint.killing_signature),
        "description": text,
    }
    return _emit(args, "classify", code, result, [text])


def _equation(family: str, rhs, table) -> str:
    if rhs == 0:
        return f"{family}_t = {family}_xx"
    printed = print_expr(rhs, table)
    if printed.startswith("-"):
        return f"{family}_t = {family}_xx - {printed[1:]}"
    return f"{family}_t = {family}_xx + {printed}"


def cmd_transform(args: Namespace) -> int:
    """
    Rewrite ``u_t = u_xx + --pde`` by a substitution or a point map.

    ``--sub "u = phi(t, x, v)"`` prints the equation for ``v`` and the
    common factor ``phi_v``; ``--map`` with ``--inverse`` prints the image
    equation in the new coordinates.
    """
    settings, table, options = _context(args)
    if bool(args.sub) == bool(args.map):
        raise LieHeatError("give exactly one of --sub and --map")
    if args.map and not args.inverse:
        raise LieHeatError("--map needs --inverse")
    F = parse_expr(args.pde, table, settings.max_exponent)
    charts = parse_charts(args.chart, table)

    rows, lines = [], []
    for chart in charts:
        if args.sub:
            form = substitute_dependent(parse_substitution(args.sub, table, chart, options), F, options)
            equation = _equation("v", form.rhs, table)
            factor = print_expr(form.factor, table)
            line = f"{equation}; factor {factor}"
            rows.append({"chart": chart.text, "rhs": print_expr(form.rhs, table), "factor": factor})
        else:
            m = parse_map(args.map, args.inverse, table, chart, options, check_group=True)
            rhs = transform_pde(m, F, options)
            line = _equation("u", rhs, table)
            rows.append({"chart": chart.text, "rhs": print_expr(rhs, table)})
        lines.append(f"[{chart}] {line}" if len(charts) > 1 else line)
    return _emit(args, "transform", EXIT_OK, {"pde": print_expr(F, table), "charts": rows}, lines)


def cmd_census(args: Namespace) -> int:
    """
    Count the equation classes of a catalog by algebra dimension.

    Returns
    -------
    int
        0 if the counts agree with the catalog's published claim, 1 otherwise.
    """
    settings = load_settings(args.config)
    path = Path(args.catalog) if args.catalog else settings.catalog
    catalog = read_catalog(path, settings.prelude, check=False)
    counts = census(catalog.entries)
    claim = catalog.census_claim
    dims = sorted(set(counts) | set(claim))
    code = EXIT_OK if all(counts.get(d, 0) == claim.get(d, counts.get(d, 0)) for d in dims) else EXIT_FAIL

    lines = []
    for dim in dims:
        line = f"dim {dim}: {counts.get(dim, 0)}"
        if dim in claim:
            line += f" (published {claim[dim]})"
        lines.append(line)
    lines.append(CENSUS_NOTE)
    result = {
        "counts": {str(d): counts.get(d, 0) for d in dims},
        "claim": {str(d): v for d, v in claim.items()},
        "note": CENSUS_NOTE,
    }
    return _emit(args, "census", code, result, lines)


def arg_parser(argv=None) -> Namespace:
    """
    Parse command-line arguments.

    Parameters
    ----------
    argv : list of str or None, optional
        Arguments without the program name. Default is ``sys.argv[1:]``.

    Returns
    -------
    argparse.Namespace
        Parsed arguments; ``handler`` is the subcommand function.
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed",
        type=_seed,
        help="Seed of the numeric zero test. Overrides LIEHEAT_SEED and the configuration file.",
    )
    common.add_argument(
        "--format", choices=("text", "json"), default="text", help="Output format. Default is text."
    )
    common.add_argument(
        "-v", "--verbose", action="count", default=0, help="Log to stderr; -v for INFO, -vv for DEBUG."
    )
    common.add_argument("--config", type=str, help="Configuration file. Default is the packaged lieheat.yaml.")
    common.add_argument(
        "--declare",
        action="append",
        help="Extra declaration such as 'param k != 0' or 'V(x)'. May be repeated.",
    )

    parser = argparse.ArgumentParser(
        prog="lieheat",
        description="Lie symmetries of the equations u_t = u_xx + F(t, x, u, u_x).",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser("verify", parents=[common], help="Verify catalog entries.")
    verify.add_argument("catalog", nargs="?", help="Catalog file. Default is the shipped catalog.")
    verify.add_argument("--only", action="append", help="Glob on entry ids, e.g. 'T3.*'. May be repeated.")
    verify.add_argument("--errata", type=str, help="Errata ledger. Default is the shipped ledger.")
    verify.add_argument("--jobs", type=_positive, help="Worker processes.")
    verify.add_argument("--chart", type=_positive, help="Verify only the n-th chart of every entry, 1-based.")
    verify.add_argument("--timing", action="store_true", help="Add elapsed times to the JSON report.")
    verify.set_defaults(handler=cmd_verify)

    residual = subparsers.add_parser("residual", parents=[common], help="Invariance residual of a field.")
    residual.add_argument("--field", required=True, help="Vector field, e.g. 't*dx + du'.")
    residual.add_argument("--pde", required=True, help="Right-hand side F of u_t = u_xx + F.")
    residual.add_argument("--chart", default="", help="Charts, e.g. 't > 0 | t < 0'.")
    residual.set_defaults(handler=cmd_residual)

    bracket = subparsers.add_parser("commutator", parents=[common], help="Commutator of two fields.")
    bracket.add_argument("first", help="First vector field.")
    bracket.add_argument("second", help="Second vector field.")
    bracket.add_argument("--chart", default="", help="Chart resolving absolute values.")
    bracket.set_defaults(handler=cmd_commutator)

    algebra = subparsers.add_parser("classify", parents=[common], help="Identify a Lie algebra.")
    algebra.add_argument("--basis", type=str, help="File with one vector field per line or separated by ';'.")
    algebra.add_argument("--fields", type=str, help="Vector fields separated by ';'.")
    algebra.add_argument("--relations", type=str, help="Relations such as '[e1, e2] = e2'.")
    algebra.add_argument("--dim", type=_positive, help="Dimension for --relations.")
    algebra.add_argument(
        "--value", action="append", help="Parameter value such as 'q=1/3'. May be repeated."
    )
    algebra.add_argument("--chart", default="", help="Chart resolving absolute values.")
    algebra.set_defaults(handler=cmd_classify)

    transform = subparsers.add_parser("transform", parents=[common], help="Change variables in an equation.")
    transform.add_argument("--pde", required=True, help="Right-hand side F of u_t = u_xx + F.")
    transform.add_argument("--sub", type=str, help="Substitution 'u = phi(t, x, v)'.")
    transform.add_argument("--map", type=str, help="Point map 't -> ..., x -> ..., u -> ...'.")
    transform.add_argument("--inverse", type=str, help="Inverse of --map in the new coordinates.")
    transform.add_argument("--chart", default="", help="Charts, e.g. 'v > 0 | v < 0'.")
    transform.set_defaults(handler=cmd_transform)

    counts = subparsers.add_parser("census", parents=[common], help="Equation classes by dimension.")
    counts.add_argument("catalog", nargs="?", help="Catalog file. Default is the shipped catalog.")
    counts.set_defaults(handler=cmd_census)

    args: Namespace = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    """
    Run one subcommand.

    Returns
    -------
    int
        Exit code: 0 success, 1 failed check, 2 input, I/O or schema error.
    """
    args = arg_parser(argv)
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (LieHeatError, OSError, yaml.YAMLError) as e:
        message = e.message if isinstance(e, LieHeatError) else str(e)
        print(f"error: {message}", file=sys.stderr)
        logger.debug("aborted", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
