"""Command-line interface: outputs, exit codes, determinism."""

import json
from pathlib import Path

import pytest

from plsim import Superposition, load_scenario, run_unitary
from plsim.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRunTable:
    def test_hardy_table_rows(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "run", "--scenario", "hardy", "--frame", "all",
            "--post-select", "D+=1,D-=1", "--output", "table",
        )
        assert code == 0
        assert "d+d- : 1/16" in out
        assert "γ    : 1/4" in out
        assert "history, frame S-," in out
        assert "weight 1/16" in out

    def test_dark_port_row(self, capsys):
        code, out, _ = run_cli(capsys, "run", "--scenario", "mzi")
        assert code == 0
        assert "D2 : 0" in out
        assert "D1 : 1" in out

    def test_float_rendering(self, capsys):
        code, out, _ = run_cli(
            capsys, "run", "--scenario", "hardy", "--float"
        )
        assert code == 0
        assert "0.0625" in out
        assert "0.5625" in out

    def test_seeded_sample_is_stable(self, capsys):
        _, out1, _ = run_cli(capsys, "run", "--scenario", "hardy", "--seed", "7")
        _, out2, _ = run_cli(capsys, "run", "--scenario", "hardy", "--seed", "7")
        assert out1 == out2
        assert "sample (seed=7):" in out1


class TestRunJson:
    def test_round_trips_through_state_serialization(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "run", "--scenario", "hardy", "--post-select", "D+=1,D-=1",
            "--output", "json",
        )
        assert code == 0
        obj = json.loads(out)
        assert obj["outcome_table"]["d+d-"] == "1/16"
        scenario = load_scenario("hardy")
        final, _ = run_unitary(scenario, scenario.frames[0])
        assert Superposition.from_json_obj(obj["final_state"]) == final
        history = obj["histories"]["S-"]
        assert history["weight"] == "1/16"
        probs = [e["probability"] for e in history["entries"] if e["probability"]]
        assert probs == ["1/8", "1/2"]

    def test_exact_strings_never_floats(self, capsys):
        _, out, _ = run_cli(capsys, "run", "--scenario", "hardy", "--output", "json")
        obj = json.loads(out)
        assert all(isinstance(v, str) for v in obj["outcome_table"].values())


class TestRunDot:
    def test_matches_golden(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "run", "--scenario", "hardy", "--frame", "s-minus",
            "--post-select", "D+=1,D-=1", "--output", "dot",
        )
        assert code == 0
        assert out == (GOLDEN / "hardy_s_minus.dot").read_text(encoding="utf-8")

    def test_byte_identical_across_invocations(self, capsys):
        argv = (
            "run", "--scenario", "hardy", "--frame", "lab",
            "--post-select", "D+=1,D-=1", "--output", "dot",
        )
        _, out1, _ = run_cli(capsys, *argv)
        _, out2, _ = run_cli(capsys, *argv)
        assert out1.encode() == out2.encode()


class TestExitCodes:
    def test_unknown_scenario_is_config_error(self, capsys):
        code, _, err = run_cli(capsys, "run", "--scenario", "nope")
        assert code == 2
        assert "--scenario" in err

    def test_unknown_frame_is_config_error(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--scenario", "hardy", "--frame", "warp"
        )
        assert code == 2
        assert "--frame" in err

    def test_dot_without_post_select_is_config_error(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--scenario", "hardy", "--frame", "lab",
            "--output", "dot",
        )
        assert code == 2
        assert "--post-select" in err

    def test_zero_probability_post_selection(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--scenario", "mzi", "--post-select", "D2=1"
        )
        assert code == 3
        assert "probability 0" in err

    def test_single_frame_paradox_is_config_error(self, capsys):
        code, _, err = run_cli(
            capsys, "paradox", "--scenario", "hardy", "--frame", "lab",
            "--post-select", "D+=1,D-=1",
        )
        assert code == 2
        assert "--frame" in err

    def test_malformed_post_select(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--scenario", "hardy", "--post-select", "bogus"
        )
        assert code == 2
        assert "post-selection" in err


class TestParadoxCommand:
    def test_hardy_reports_paradox(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "paradox", "--scenario", "hardy",
            "--frame", "lab", "--frame", "s-plus", "--frame", "s-minus",
            "--post-select", "D+=1,D-=1",
        )
        assert code == 0
        assert "PARADOX: joint facts unsupported" in out
        assert "positron takes u+ (certain)" in out
        assert "electron takes u- (certain)" in out
        assert "joint (u+,u-) excluded" in out

    def test_spin_pair_reports_consistent(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "paradox", "--scenario", "epr", "--frame", "all",
            "--post-select", "A=up,B=down",
        )
        assert code == 0
        assert "CONSISTENT" in out

    def test_color_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv("PLSIM_COLOR", "1")
        _, out, _ = run_cli(
            capsys,
            "paradox", "--scenario", "hardy", "--frame", "all",
            "--post-select", "D+=1,D-=1",
        )
        assert "\x1b[31mPARADOX" in out
        monkeypatch.setenv("PLSIM_COLOR", "0")
        _, out, _ = run_cli(
            capsys,
            "paradox", "--scenario", "hardy", "--frame", "all",
            "--post-select", "D+=1,D-=1",
        )
        assert "\x1b[" not in out


class TestScenarioFileFlag:
    def test_file_scenario_runs(self, capsys, tmp_path):
        from plsim import scenario_to_json

        path = tmp_path / "custom.json"
        path.write_text(
            json.dumps(scenario_to_json(load_scenario("hardy"))), encoding="utf-8"
        )
        code, out, _ = run_cli(
            capsys, "run", "--scenario-file", str(path), "--frame", "lab"
        )
        assert code == 0
        assert "C+=0;D+=1,C-=0;D-=1 : 1/16" in out

    def test_missing_file_is_config_error(self, capsys):
        code, _, err = run_cli(
            capsys, "run", "--scenario-file", "/does/not/exist.json"
        )
        assert code == 2
        assert "--scenario-file" in err
