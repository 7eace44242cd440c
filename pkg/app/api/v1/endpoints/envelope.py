# app/api/v1/endpoints/envelope.py
from app.core.errors import EXIT_FAILED, EXIT_OK
from app.models.command import Command, OutputFormat
from app.services.catalog.registry import get_registry
from app.services.envelope.envelope import decompose as decompose_operator
from app.services.envelope.envelope import enumerate_env_basis, summarize
from app.services.storage.report_sink import ReportSink


def decompose(command: Command, sink: ReportSink) -> int:
    """--s picks the algebra, --n the product degree bound"""
    name = command.targets[0]
    registry = get_registry()
    registry.validate(name)
    basis = enumerate_env_basis(command.s or 3, n=command.mark,
                                max_degree=2 if command.n is None else command.n)
    result = decompose_operator(registry.resolve(name, command.mark), basis, target_name=name, force=command.force)
    summary = summarize(result)
    if command.output_format == OutputFormat.JSON:
        sink.write(summary.model_dump_json(indent=2))
    else:
        lines = [f"({term.coefficient}) {' '.join(term.product)}" for term in summary.terms]
        status = "residual 0" if summary.success else f"residual with {summary.residual_terms} terms"
        lines.append(f"# {name} in g^({summary.s}), degree <= {summary.max_degree}, "
                     f"{summary.basis_size} products: {status}")
        sink.write("\n".join(lines))
    return EXIT_OK if summary.success else EXIT_FAILED


def register(subparsers, common) -> None:
    parser = subparsers.add_parser("decompose", parents=[common], help="Write an operator in hidden-algebra generators")
    parser.add_argument("name")
    parser.set_defaults(handler=decompose)
