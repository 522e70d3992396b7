import json
import subprocess
import sys

import pytest

from revcrochet import doc_from_json
from revcrochet.cli import run

from conftest import golden

RUNNING_ARGS = [
    "--function", "x^3 + 2*x^2 - 2*x + 4",
    "--a", "-3", "--b", "1",
    "--stitch-gauge", "22", "--row-gauge", "25",
    "--scale", "0.18",
]


class TestRun:
    def test_running_example_text(self, capsys):
        assert run(RUNNING_ARGS) == 0
        out = capsys.readouterr()
        assert out.out == golden("running_example.txt")
        assert out.err == ""

    def test_invalid_interval_exits_2(self, capsys):
        code = run(["--function", "x", "--a", "1", "--b", "0",
                    "--stitch-gauge", "22", "--row-gauge", "25", "--scale", "0.18"])
        assert code == 2
        err = capsys.readouterr().err
        assert "a must be less than b" in err

    def test_bad_expression_exits_2(self, capsys):
        code = run(["--function", "sin(1/x", "--a", "0", "--b", "1",
                    "--stitch-gauge", "22", "--row-gauge", "25", "--scale", "0.18"])
        assert code == 2
        assert "position" in capsys.readouterr().err

    def test_negative_function_exits_2(self, capsys):
        code = run(["--function", "x - 10", "--a", "0", "--b", "1",
                    "--stitch-gauge", "22", "--row-gauge", "25", "--scale", "0.18"])
        assert code == 2
        assert "nonnegative" in capsys.readouterr().err

    def test_svg_format_without_extrema(self, capsys):
        assert run(RUNNING_ARGS + ["--no-extrema", "--format", "svg"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("<svg ")
        assert out.count("<circle") == 17

    def test_json_format(self, capsys):
        assert run(RUNNING_ARGS + ["--format", "json"]) == 0
        obj = json.loads(capsys.readouterr().out)
        assert obj["function"] == "x^3 + 2*x^2 - 2*x + 4"
        assert obj["rows"][6]["k"] == 1

    def test_json_regenerates_identical_text(self, capsys):
        assert run(RUNNING_ARGS + ["--format", "json"]) == 0
        json_text = capsys.readouterr().out
        assert run(RUNNING_ARGS) == 0
        plain_text = capsys.readouterr().out
        assert doc_from_json(json_text).to_text() == plain_text

    def test_deterministic_output(self, capsys):
        assert run(RUNNING_ARGS) == 0
        first = capsys.readouterr().out
        assert run(RUNNING_ARGS) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_output_path(self, tmp_path, capsys):
        target = tmp_path / "pattern.txt"
        assert run(RUNNING_ARGS + ["--output", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert target.read_text(encoding="utf-8") == golden("running_example.txt")

    def test_warnings_are_not_failures(self, capsys):
        code = run(["--function", "x^2 + 0.05", "--a", "0", "--b", "1",
                    "--stitch-gauge", "40", "--row-gauge", "10", "--scale", "1"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("Note: Row ")

    def test_missing_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            run(["--function", "x"])
        assert exc.value.code == 2

    def test_help_documents_grammar(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run(["--help"])
        assert exc.value.code == 0
        helptext = capsys.readouterr().out
        assert "expression grammar" in helptext
        assert "2*x, not 2x" in helptext


class TestInstalledEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "revcrochet.cli", *RUNNING_ARGS],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout == golden("running_example.txt")
