"""
Response utilities: report models to JSON-lines records and exit codes
"""
import json
import logging
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from src.models.report import ErrorReport
from src.utils.errors import AnalysisError, InfeasibleSystemError, ProgramSyntaxError

logger = logging.getLogger(__name__)

USAGE_EXIT_CODE = 2


def create_record(report: BaseModel) -> Dict[str, Any]:
    """
    JSON-ready dict of a report, leaving out fields that are unset
    """
    return report.model_dump(mode="json", exclude_none=True)


def create_error_record(error: Exception, command: Optional[str] = None) -> Dict[str, Any]:
    """
    Error record for any failure; analysis errors keep their kind and exit code
    """
    if isinstance(error, AnalysisError):
        report = ErrorReport(
            command=command, error=str(error), kind=error.kind, exit_code=error.exit_code
        )
        if isinstance(error, ProgramSyntaxError):
            report.line = error.line
            report.column = error.column
        if isinstance(error, InfeasibleSystemError):
            report.conflict = error.conflict
    elif isinstance(error, OSError):
        report = ErrorReport(
            command=command, error=str(error), kind="io", exit_code=USAGE_EXIT_CODE
        )
    else:
        report = ErrorReport(
            command=command, error=str(error), kind="internal", exit_code=USAGE_EXIT_CODE
        )

    logger.error(f"Error record ({report.kind}): {report.error}")
    return create_record(report)


def create_response(exit_code: int, records: List[Dict[str, Any]]) -> Dict[str, Any]:
    """
    Standardized router response: the exit code and the records to print
    """
    response = {"exitCode": exit_code, "records": records}
    logger.info(f"Response created with exit code {exit_code} and {len(records)} record(s)")
    return response


def render_lines(response: Dict[str, Any]) -> str:
    return "".join(json.dumps(record, sort_keys=True) + "\n" for record in response["records"])
