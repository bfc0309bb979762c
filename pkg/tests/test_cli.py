import sys
import os

# ensure local package is importable when running tests from workspace root
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

import json

import pytest

from adlvlab.errors import IdentityViolation
from adlvlab.models import CACHE_ENV, RunConfig
from cli import grid_point, main, parse_mu, render_table


@pytest.fixture(autouse=True)
def no_cache_env(monkeypatch):
    monkeypatch.delenv(CACHE_ENV, raising=False)


def run_json(capsys, *argv):
    status = main([*argv, "--json"])
    return status, json.loads(capsys.readouterr().out)


def test_validate(capsys):
    status, payload = run_json(capsys, "validate", "--group", "A2")
    assert status == 0
    assert payload["rank"] == 2
    assert payload["weyl_order"] == 6
    assert payload["omega_order"] == 3
    assert payload["split"] is True


def test_length(capsys):
    status, payload = run_json(capsys, "length", "s0 s1 s0")
    assert status == 0
    assert payload["length"] == 3


def test_classpoly(capsys):
    status, payload = run_json(capsys, "classpoly", "t[-2] * w[1]")
    assert status == 0
    assert payload["element"] == "s1 s0 s1"
    assert [(c["key"], c["coeffs"]) for c in payload["classes"]] == [("C:s1", [1, 1]), ("C:s1 s0", [0, 1])]


def test_bgmu(capsys):
    status, payload = run_json(capsys, "bgmu", "2")
    assert status == 0
    assert [c["basic"] for c in payload["classes"]] == [False, True]
    assert payload["classes"][0]["newton"] == [2]


def test_adlv_with_volume_checks(capsys):
    status, payload = run_json(capsys, "adlv", "2", "B:1", "--q", "2")
    assert status == 0
    assert payload["dim"] == 1
    assert payload["orbit_count"] == 1
    assert payload["q_check"] == [{"q": 2, "Q": {"num": 1, "den": 3}, "vol": 3, "product": 1, "holds": True}]


def test_check_commands(capsys):
    assert main(["check-prop36", "--group", "C2"]) == 0
    assert main(["check-theorem-a", "2"]) == 0
    assert main(["check-chenzhu", "2"]) == 0
    capsys.readouterr()


def test_table_output(capsys):
    assert main(["bgmu", "2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("┌")
    assert "B:1" in out


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    assert main(["length", "s1", "--json", "--output", str(target)]) == 0
    assert json.loads(target.read_text())["length"] == 1
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["length", "s9"],
        ["bgmu", "1,2"],
        ["validate", "--budget", "0"],
        ["validate", "--group", "no-such-group"],
        ["adlv", "2", "1", "--group", "PGL2tw"],
    ],
)
def test_usage_errors_exit_with_two(argv, capsys):
    assert main(argv) == 2
    payload = json.loads(capsys.readouterr().out)
    assert payload["success"] is False


def test_helpers():
    assert parse_mu("[1, 0]", 2) == (1, 0)
    lines = render_table(["a", "b"], [[1, "xy"]])
    assert lines[1] == "│ a │ b  │"
    assert len({len(line) for line in lines}) == 1


@pytest.mark.parametrize(
    "preset,max_length",
    [("A1", 6), ("A2", 4), ("C2", 4), ("G2", 6), ("2A2", 4), ("2A3", 6), ("ResA1", 2)],
)
def test_grid_has_no_failures(preset, max_length, capsys):
    status, payload = run_json(capsys, "grid", "--presets", preset, "--max-length", str(max_length))
    assert status == 0
    assert payload["ok"] is True
    assert payload["points"]
    for point in payload["points"]:
        assert point["failures"] == []
        assert point["frames"] >= 1


def test_grid_point_records_engine_errors(monkeypatch):
    def fail(*args, **kwargs):
        raise IdentityViolation("no very special parahoric")

    monkeypatch.setattr("cli.verify_theorem_a", fail)
    record = grid_point("A1", (2,), RunConfig())
    assert record["ok"] is False
    assert record["failures"] == ["IdentityViolation: no very special parahoric"]


def test_adlv_reports_the_twisted_frame_of_psp4(capsys):
    status, payload = run_json(capsys, "adlv", "0,1", "B:tau:1", "--group", "C2")
    assert status == 0
    assert payload["all_very_special"] is True
    assert [c["holds"] for c in payload["q_check"]] == [True, True, True]
