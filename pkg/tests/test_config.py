"""Tests for settings loaded from the environment."""
import pytest
from pydantic import ValidationError

from src.utils.config import Settings, load_settings


class TestLoadSettings:
    def test_defaults(self, monkeypatch):
        for name in ("SOLVER_TIMEOUT", "BRANCH_LIMIT", "BIG_M", "FUEL", "LOG_LEVEL"):
            monkeypatch.delenv(f"LOGAMORT_{name}", raising=False)

        settings = load_settings(dotenv=False)

        assert settings == Settings()
        assert (settings.solver_timeout, settings.branch_limit) == (60.0, 256)
        assert (settings.big_m, settings.fuel, settings.log_level) == (1000, 1_000_000, "WARNING")

    def test_environment_values(self, monkeypatch):
        monkeypatch.setenv("LOGAMORT_BRANCH_LIMIT", "16")
        monkeypatch.setenv("LOGAMORT_LOG_LEVEL", "debug")

        settings = load_settings(dotenv=False)

        assert settings.branch_limit == 16
        assert settings.log_level == "DEBUG"

    def test_overrides_beat_the_environment(self, monkeypatch):
        monkeypatch.setenv("LOGAMORT_SOLVER_TIMEOUT", "5")

        settings = load_settings({"solver_timeout": 9.5, "fuel": None}, dotenv=False)

        assert settings.solver_timeout == 9.5
        assert settings.fuel == 1_000_000

    def test_empty_variable_is_ignored(self, monkeypatch):
        monkeypatch.setenv("LOGAMORT_BIG_M", "")

        assert load_settings(dotenv=False).big_m == 1000

    @pytest.mark.parametrize(
        "name,value",
        [("LOG_LEVEL", "chatty"), ("BRANCH_LIMIT", "0"), ("SOLVER_TIMEOUT", "-1"), ("FUEL", "x")],
    )
    def test_invalid_values_raise(self, monkeypatch, name, value):
        monkeypatch.setenv(f"LOGAMORT_{name}", value)

        with pytest.raises(ValidationError):
            load_settings(dotenv=False)
