"""
Command handlers for the analyzer: check | run | validate | export
"""
import logging
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from src.models.constraint import Assignment, ConstraintSet
from src.models.program import Program, format_path
from src.models.report import (
    ExportReport,
    FunctionVerdict,
    RunReport,
    ValidationReport,
    Witness,
)
from src.models.signature import AnnotatedPair, AnnotatedSignature
from src.potential.coef_file import parse_coef, render_coef
from src.semantics.evaluator import run_function
from src.semantics.validation import (
    DEFAULT_MAX_SIZE,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    validate_pair,
)
from src.solver.backends import INTERNAL, SMTLIB_OUT, BackendResult, run_backend, validate_backend
from src.solver.smtlib import export_smtlib
from src.syntax.normalize import normalize
from src.syntax.parser import parse_program, parse_value
from src.syntax.typecheck import simple_typecheck
from src.typesystem.derivation import COSTED, Derivation, WeakeningRecord, result_arity
from src.typesystem.derive import derive, function_constraints
from src.typesystem.signatures import solved_signature
from src.typesystem.tactics import Tactics, parse_tactics
from src.utils.config import Settings
from src.utils.errors import AnalysisError, InfeasibleSystemError, SolverLimitError
from src.utils.response import create_error_record, create_record, create_response

logger = logging.getLogger(__name__)

Event = Mapping[str, Any]
Response = Dict[str, Any]

COMMANDS = ("check", "run", "validate", "export")


def handle_command(event: Event, settings: Settings) -> Response:
    """
    Main command router; every failure becomes an error record with its exit code
    """
    command = event.get("command", "")
    logger.info(f"Routing command: {command}")
    handlers: Dict[str, Callable[[Event, Settings], Response]] = {
        "check": cmd_check,
        "run": cmd_run,
        "validate": cmd_validate,
        "export": cmd_export,
    }
    try:
        handler = handlers.get(command)
        if handler is None:
            raise AnalysisError(f"unknown command {command!r}; use one of {', '.join(COMMANDS)}")
        return handler(event, settings)
    except AnalysisError as e:
        logger.error(f"Error in {command or 'command'}: {str(e)}")
        return create_response(e.exit_code, [create_error_record(e, command)])
    except OSError as e:
        logger.error(f"I/O error in {command}: {str(e)}", exc_info=True)
        return create_response(2, [create_error_record(e, command)])
    except Exception as e:
        logger.error(f"Error in handle_command: {str(e)}", exc_info=True)
        return create_response(2, [create_error_record(e, command)])


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------


def _read(event: Event, key: str, required: bool = True) -> Tuple[Optional[str], Optional[str]]:
    """Text and source name of an input given inline as <key>_text or as a file path."""
    inline = event.get(f"{key}_text")
    if inline is not None:
        return str(inline), f"<{key}>"
    path = event.get(key)
    if path is None:
        if required:
            raise AnalysisError(f"missing {key} argument")
        return None, None
    return Path(path).read_text(), str(path)


def load_program(event: Event) -> Program:
    """Parse the program together with every --include file, then infer simple types."""
    text, source = _read(event, "program")
    assert text is not None
    program = parse_program(text, source)
    for include in event.get("include") or []:
        extra = parse_program(Path(include).read_text(), str(include))
        program = Program(
            program.definitions + extra.definitions,
            {**extra.declarations, **program.declarations},
        )
    return simple_typecheck(program)


def load_annotations(event: Event, program: Program) -> Dict[str, AnnotatedSignature]:
    text, source = _read(event, "coef", required=False)
    if text is None:
        return {}
    arities: Dict[str, Tuple[int, int]] = {}
    for definition in program.definitions:
        assert definition.signature is not None
        arities[definition.name] = (
            len(definition.tree_params()),
            result_arity(definition.signature.result),
        )
    return parse_coef(text, arities, source)


def load_tactics(event: Event) -> Tactics:
    text, source = _read(event, "tactics", required=False)
    if text is None:
        return Tactics()
    return parse_tactics(text, source)


def _derive(event: Event, settings: Settings) -> Tuple[Program, Derivation]:
    program = load_program(event)
    annotated = load_annotations(event, program)
    tactics = load_tactics(event)
    normalized = normalize(program)
    return normalized, derive(normalized, annotated, tactics, settings)


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def cmd_check(event: Event, settings: Settings) -> Response:
    """
    Derive, solve per function and then jointly; exit 0 iff every system is feasible
    """
    backend = validate_backend(event.get("backend") or INTERNAL)
    if backend == SMTLIB_OUT:
        raise AnalysisError("check needs a solver; use export to write the SMT-LIB script")
    explain = bool(event.get("explain"))
    program, derivation = _derive(event, settings)

    records: List[Dict[str, Any]] = []
    verdicts: List[str] = []
    for name in program.names():
        verdict = _check_function(derivation, name, backend, settings, explain)
        verdicts.append(verdict.verdict)
        records.append(create_record(verdict))

    summary = _check_program(derivation, program, backend, settings, verdicts)
    records.append(create_record(summary))
    return create_response(_verdict_exit(summary.verdict), records)


def _verdict_exit(verdict: str) -> int:
    if verdict == "feasible":
        return 0
    if verdict == "unknown":
        return SolverLimitError.exit_code
    return InfeasibleSystemError.exit_code


def _solve(
    cs: ConstraintSet, backend: str, settings: Settings, report: FunctionVerdict
) -> Optional[BackendResult]:
    started = time.monotonic()
    report.unknowns, report.constraints = cs.stats()
    report.implications = len(cs.implications)
    try:
        result = run_backend(cs, backend, settings)
    except InfeasibleSystemError as e:
        report.verdict = "infeasible"
        report.conflict = e.conflict
        report.message = str(e)
        return None
    except SolverLimitError as e:
        report.verdict = "unknown"
        report.message = str(e)
        return None
    finally:
        report.seconds = round(time.monotonic() - started, 6)
    report.verdict = "feasible"
    if result.stats is not None:
        report.branches_explored = result.stats.branches
        report.pivots = result.stats.pivots
    return result


def _full_assignment(derivation: Derivation, assignment: Assignment) -> Dict[str, Fraction]:
    values = {name: Fraction(0) for name in derivation.constraints.unknowns}
    values.update(assignment)
    return values


def _check_function(
    derivation: Derivation, name: str, backend: str, settings: Settings, explain: bool
) -> FunctionVerdict:
    report = FunctionVerdict(function=name, verdict="unknown")
    report.branches = derivation.branch_statuses(name)
    if explain:
        report.rules = [
            f"{record.scope} {format_path(record.path)} {record.rule}"
            for record in derivation.records
            if record.function == name
        ]
    result = _solve(function_constraints(derivation, name), backend, settings, report)
    model: Optional[Assignment] = None
    if result is not None and result.assignment is not None:
        model = _full_assignment(derivation, result.assignment)
        report.coef = render_coef([solved_signature(derivation.signatures[name], model)])
    if explain:
        report.weakenings = [
            _render_weakening(weakening, model)
            for weakening in derivation.weakenings
            if weakening.function == name
        ]
    logger.info(f"{name}: {report.verdict} in {report.seconds}s")
    return report


def _render_weakening(weakening: WeakeningRecord, model: Optional[Assignment]) -> str:
    context = ", ".join(weakening.context)
    parts = [f"{weakening.scope} {format_path(weakening.path)} w over ({context})"]
    for number, certificate in enumerate(weakening.certificates):
        parts.append(f"certificate {number}:")
        parts.append(certificate.render(model))
    return "\n".join(parts)


def _check_program(
    derivation: Derivation,
    program: Program,
    backend: str,
    settings: Settings,
    verdicts: List[str],
) -> FunctionVerdict:
    report = FunctionVerdict(verdict="unknown")
    if any(verdict != "feasible" for verdict in verdicts):
        report.verdict = "unknown" if "unknown" in verdicts else "infeasible"
        report.message = "not every function is feasible; joint system not solved"
        report.unknowns, report.constraints = derivation.constraints.stats()
        report.implications = len(derivation.constraints.implications)
        return report
    result = _solve(derivation.constraints, backend, settings, report)
    if result is not None and result.assignment is not None:
        values = _full_assignment(derivation, result.assignment)
        report.coef = render_coef(
            solved_signature(derivation.signatures[name], values) for name in program.names()
        )
    return report


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def cmd_run(event: Event, settings: Settings) -> Response:
    program = load_program(event)
    function = event.get("function")
    if not function:
        raise AnalysisError("run needs a function name")
    if function not in program.names():
        raise AnalysisError(f"undefined function {function}")
    arguments = [parse_value(str(text)) for text in event.get("arguments") or []]
    value, cost = run_function(program, function, arguments, settings.fuel)
    report = RunReport(
        function=function,
        arguments=[str(argument) for argument in arguments],
        value=str(value),
        cost=cost,
    )
    return create_response(0, [create_record(report)])


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def cmd_validate(event: Event, settings: Settings) -> Response:
    """
    Sample the costed pair and every cost-free pair of a numeric annotation
    """
    program = load_program(event)
    annotated = load_annotations(event, program)
    function = event.get("function")
    if not function:
        raise AnalysisError("validate needs a function name")
    if function not in program.names():
        raise AnalysisError(f"undefined function {function}")
    signature = annotated.get(function)
    if signature is None:
        raise AnalysisError(f"the annotation file has no entry for {function}")

    samples = int(event.get("samples") or DEFAULT_SAMPLES)
    max_size = int(event.get("max_size") or DEFAULT_MAX_SIZE)
    seed = int(event["seed"]) if event.get("seed") is not None else DEFAULT_SEED

    pairs: List[Tuple[str, AnnotatedPair[Fraction], bool]] = []
    if signature.costed is not None:
        pairs.append((COSTED, signature.costed, True))
    for number, pair in enumerate(signature.cost_free):
        pairs.append((f"cost-free{number}", pair, False))
    if not pairs:
        raise AnalysisError(f"the annotation of {function} has no pair to validate")

    records: List[Dict[str, Any]] = []
    failed = 0
    for label, pair, costed in pairs:
        outcome = validate_pair(
            program,
            function,
            pair.argument,
            pair.result,
            costed,
            samples=samples,
            max_size=max_size,
            seed=seed,
            fuel=settings.fuel,
        )
        failed += outcome.failed
        report = ValidationReport(
            function=function,
            pair=label,
            samples=outcome.attempted,
            skipped=outcome.skipped,
            passed=outcome.passed,
            failed=outcome.failed,
            worst_slack=outcome.worst_slack,
            seconds=round(outcome.seconds, 6),
            witnesses=[
                Witness(
                    arguments=[str(argument) for argument in sample.arguments],
                    result=str(sample.result),
                    cost=sample.cost,
                    potential_in=sample.potential_in,
                    potential_out=sample.potential_out,
                    slack=sample.slack,
                )
                for sample in outcome.witnesses
            ],
        )
        records.append(create_record(report))
    return create_response(1 if failed else 0, records)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def cmd_export(event: Event, settings: Settings) -> Response:
    _, derivation = _derive(event, settings)
    script = export_smtlib(derivation.constraints)
    report = ExportReport()
    report.unknowns, report.constraints = derivation.constraints.stats()
    report.implications = len(derivation.constraints.implications)
    out = event.get("out")
    if out:
        Path(out).write_text(script)
        report.path = str(out)
        logger.info(f"Wrote SMT-LIB script to {out}")
    else:
        report.script = script
    return create_response(0, [create_record(report)])
