# app/api/v1/endpoints/representation.py
from fractions import Fraction

from app.core.errors import EXIT_FAILED, EXIT_OK, UsageError
from app.models.command import Command, OutputFormat
from app.services.algebra.diffop2 import check_flag_preservation
from app.services.catalog.registry import get_registry
from app.services.representation import repspace
from app.services.storage.report_sink import ReportSink

DEFAULT_S = 3
DEFAULT_N = 4


def _flag(command: Command):
    return command.s or DEFAULT_S, DEFAULT_N if command.n is None else command.n


def _matrix(command: Command):
    op = get_registry().resolve(command.targets[0], command.mark)
    s, n = _flag(command)
    params = command.params
    zero = Fraction(0)
    return repspace.matrix(
        op,
        repspace.basis(s, n),
        params.lam if params.lam is not None else zero,
        params.nu if params.nu is not None else zero,
        params.omega if params.omega is not None else zero,
    )


def matrix(command: Command, sink: ReportSink) -> int:
    """Exact matrix on P^(s)_n; unset parameters are taken as 0"""
    m = _matrix(command)
    if command.output_format == OutputFormat.CSV:
        sink.write(repspace.matrix_to_csv(m))
    elif command.output_format == OutputFormat.JSON:
        sink.write(repspace.matrix_to_json(m))
    elif command.output_format == OutputFormat.TEXT:
        sink.write(repspace.matrix_to_frame(m).to_string())
    else:
        raise UsageError("matrix supports text, csv and json output")
    return EXIT_OK


def spectrum(command: Command, sink: ReportSink) -> int:
    m = _matrix(command)
    values = repspace.spectrum(m)
    rows = [{"monomial": list(pq), "eigenvalue": value} for pq, value in zip(m.basis.monomials, values)]
    if command.output_format == OutputFormat.JSON:
        sink.write_json(rows)
    else:
        sink.write("\n".join(f"[{p} {q}] {value}" for (p, q), value in zip(m.basis.monomials, values)))
    return EXIT_OK


def flagcheck(command: Command, sink: ReportSink) -> int:
    op = get_registry().resolve(command.targets[0], command.mark)
    s, n = _flag(command)
    report = check_flag_preservation(op, s, n)
    if command.output_format == OutputFormat.JSON:
        sink.write(report.model_dump_json())
    elif report.preserved:
        sink.write(f"{command.targets[0]} preserves P^({s})_n for n <= {n}")
    else:
        w = report.witness
        sink.write(f"{command.targets[0]} breaks P^({s}): {list(w.monomial)} -> {list(w.image)} "
                   f"(grading {w.source_grading} -> {w.image_grading})")
    return EXIT_OK if report.preserved else EXIT_FAILED


def register(subparsers, common) -> None:
    for verb, handler, text in (
        ("matrix", matrix, "Exact matrix on a flag space"),
        ("spectrum", spectrum, "Diagonal of the triangular matrix"),
        ("flagcheck", flagcheck, "Check that an operator preserves the s-flag"),
    ):
        parser = subparsers.add_parser(verb, parents=[common], help=text)
        parser.add_argument("name")
        parser.set_defaults(handler=handler)
