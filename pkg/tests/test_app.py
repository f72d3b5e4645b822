"""
Unit tests for the command-line entry point
"""
import json

import pytest

from app import build_event, build_parser, main


def _records(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines()]


class TestBuildEvent:
    """Arguments become the router event"""

    def test_positional_files_fill_coef_and_tactics(self):
        arguments = build_parser().parse_args(["check", "p.core", "p.coef", "p.tac"])

        event = build_event(arguments)

        assert event["command"] == "check"
        assert (event["program"], event["coef"], event["tactics"]) == ("p.core", "p.coef", "p.tac")
        assert "log_level" not in event

    def test_flag_wins_over_positional(self):
        arguments = build_parser().parse_args(["check", "p.core", "a.coef", "--coef", "b.coef"])

        assert build_event(arguments)["coef"] == "b.coef"

    def test_validate_defaults(self):
        arguments = build_parser().parse_args(["validate", "p.core", "p.coef", "f"])

        event = build_event(arguments)

        assert (event["samples"], event["max_size"], event["seed"]) == (10000, 64, 42)

    def test_missing_subcommand_exits(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestMain:
    """main prints one JSON record per line and returns the exit code"""

    def test_run(self, corpus_dir, capsys):
        program = str(corpus_dir / "splay.core")

        exit_code = main(["run", program, "splay", "1", "(leaf, 1, leaf)"])

        assert exit_code == 0
        (record,) = _records(capsys)
        assert record == {
            "arguments": ["1", "(leaf, 1, leaf)"],
            "command": "run",
            "cost": 1,
            "function": "splay",
            "value": "(leaf, 1, leaf)",
        }

    def test_check(self, corpus_dir, capsys):
        files = [str(corpus_dir / name) for name in ("splay.core", "splay.coef", "splay.tac")]

        exit_code = main(["--timeout", "120", "check", *files])

        assert exit_code == 0
        assert [record["verdict"] for record in _records(capsys)] == ["feasible", "feasible"]

    def test_router_exit_code_is_returned(self, capsys, mocker):
        response = {"exitCode": 4, "records": [{"kind": "type", "error": "bad"}]}
        handle = mocker.patch("app.handle_command", return_value=response)

        exit_code = main(["check", "p.core"])

        assert exit_code == 4
        assert handle.call_args.args[0]["program"] == "p.core"
        assert _records(capsys) == [{"error": "bad", "kind": "type"}]

    def test_bad_log_level_is_a_usage_error(self, capsys):
        exit_code = main(["--log-level", "chatty", "run", "p.core", "f"])

        assert exit_code == 2
        (record,) = _records(capsys)
        assert record["kind"] == "internal"
        assert record["command"] == "run"
