"""
Report records printed by the command router, one JSON object per line
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class FunctionVerdict(BaseModel):
    """Outcome of checking one function, or the whole program when function is None."""

    command: str = "check"
    function: Optional[str] = None
    verdict: str
    branches: Dict[str, str] = Field(default_factory=dict)
    coef: Optional[str] = None
    unknowns: int = 0
    constraints: int = 0
    implications: int = 0
    branches_explored: int = 0
    pivots: int = 0
    seconds: float = 0.0
    conflict: List[str] = Field(default_factory=list)
    rules: List[str] = Field(default_factory=list)
    weakenings: List[str] = Field(default_factory=list)
    message: Optional[str] = None


class Witness(BaseModel):
    arguments: List[str]
    result: str
    cost: int
    potential_in: float
    potential_out: float
    slack: float


class ValidationReport(BaseModel):
    command: str = "validate"
    function: str
    pair: str
    samples: int = 0
    skipped: int = 0
    passed: int = 0
    failed: int = 0
    worst_slack: Optional[float] = None
    witnesses: List[Witness] = Field(default_factory=list)
    seconds: float = 0.0


class RunReport(BaseModel):
    command: str = "run"
    function: str
    arguments: List[str]
    value: str
    cost: int


class ExportReport(BaseModel):
    command: str = "export"
    path: Optional[str] = None
    unknowns: int = 0
    constraints: int = 0
    implications: int = 0
    script: Optional[str] = None


class ErrorReport(BaseModel):
    command: Optional[str] = None
    error: str
    kind: str
    exit_code: int
    line: Optional[int] = None
    column: Optional[int] = None
    conflict: List[str] = Field(default_factory=list)
