"""Pytest configuration and shared fixtures."""
import logging
import shutil
import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from src.syntax.normalize import normalize  # noqa: E402
from src.syntax.parser import parse_program  # noqa: E402
from src.syntax.typecheck import simple_typecheck  # noqa: E402
from src.utils.config import Settings  # noqa: E402

logging.basicConfig(level=logging.INFO)

CORPUS = PROJECT_ROOT / "corpus"


def load_corpus(*names: str):
    """Parse and type check corpus programs as one program."""
    text = "\n\n".join((CORPUS / name).read_text() for name in names)
    return simple_typecheck(parse_program(text, "+".join(names)))


def external_solver():
    for name in ("z3", "cvc5"):
        path = shutil.which(name)
        if path:
            return path
    return None


@pytest.fixture
def corpus_dir():
    return CORPUS


@pytest.fixture
def settings():
    return Settings(solver_timeout=120, branch_limit=256, big_m=1000, fuel=1_000_000)


@pytest.fixture(scope="session")
def splay_program():
    return load_corpus("splay.core")


@pytest.fixture(scope="session")
def splay_normalized():
    return simple_typecheck(normalize(load_corpus("splay.core")))


@pytest.fixture
def corpus():
    """Factory: corpus("splay.core", "insert.core") parses and type checks both files."""
    return load_corpus


@pytest.fixture
def smt_solver():
    path = external_solver()
    if path is None:
        pytest.skip("no z3 or cvc5 on PATH")
    return path
