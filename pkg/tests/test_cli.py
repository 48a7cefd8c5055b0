"""Command-line interface: output shapes, exit codes, determinism."""

import json

import pytest

from toric_virasoro.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestEnumerate:
    def test_f0_rank_two(self, capsys):
        code, out = run(
            capsys, "enumerate", "--surface", "f0", "--r", "2",
            "--delta", "1,1", "--c2", "2", "--H", "2,5",
        )
        assert code == 0
        assert "fixed points: 4" in out

    def test_p2_point_case(self, capsys):
        code, out = run(
            capsys, "enumerate", "--surface", "p2", "--r", "2",
            "--delta", "1", "--c2", "1", "--H", "1",
        )
        assert code == 0
        assert "fixed points: 1" in out

    def test_json_output_parses(self, capsys):
        code, out = run(
            capsys, "enumerate", "--surface", "f0", "--r", "2",
            "--delta", "1,1", "--c2", "2", "--H", "2,5", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        (section,) = payload
        assert section["fixed_points"] == 4
        assert len(section["rows"]) == 4
        assert all(len(row) == 4 for row in section["rows"])

    def test_markdown_output(self, capsys):
        code, out = run(
            capsys, "enumerate", "--surface", "p2", "--r", "2",
            "--delta", "1", "--c2", "1", "--H", "1", "--format", "markdown",
        )
        assert code == 0
        assert r"$F\vert_{X_1}$" in out

    def test_all_chambers(self, capsys):
        code, out = run(
            capsys, "enumerate", "--surface", "f0", "--r", "2",
            "--delta", "1,0", "--c2", "1", "--H", "all-chambers",
        )
        assert code == 0
        assert out.count("H=(") >= 2

    def test_determinism(self, capsys):
        argv = (
            "enumerate", "--surface", "f1", "--r", "2",
            "--delta", "0,1", "--c2", "1", "--H", "3,2",
        )
        _, first = run(capsys, *argv)
        _, second = run(capsys, *argv)
        assert first == second

    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "case.json"
        cfg.write_text(json.dumps({
            "surface": "f0", "r": 2, "delta": [1, 1], "c2": 2, "H": [2, 5],
        }))
        code, out = run(capsys, "enumerate", "--config", str(cfg))
        assert code == 0
        assert "fixed points: 4" in out


class TestVerify:
    def test_bundled_point_cases_pass(self, capsys):
        code, out = run(capsys, "verify", "--case", "p2-r2-c2-1")
        assert code == 0
        assert "PASS" in out
        code, out = run(capsys, "verify", "--case", "f1-FZ-c2-1")
        assert code == 0
        assert "PASS" in out


class TestExitCodes:
    def test_unknown_case_is_config_error(self, capsys):
        code, _ = run(capsys, "verify", "--case", "no-such-case")
        assert code == 2

    def test_unsupported_rank_is_config_error(self, capsys):
        code, _ = run(
            capsys, "enumerate", "--surface", "f0", "--r", "3",
            "--delta", "1,0", "--c2", "2", "--H", "2,5",
        )
        assert code == 2

    def test_on_wall_polarization_is_config_error(self, capsys):
        code, _ = run(
            capsys, "enumerate", "--surface", "f0", "--r", "2",
            "--delta", "1,0", "--c2", "2", "--H", "1,1",
        )
        assert code == 2

    def test_slope_tie_is_config_error(self, capsys):
        code, _ = run(
            capsys, "enumerate", "--surface", "f0", "--r", "2",
            "--delta", "2,0", "--c2", "2", "--H", "2,5",
        )
        assert code == 2

    def test_non_ample_polarization_is_config_error(self, capsys):
        code, _ = run(
            capsys, "enumerate", "--surface", "f2", "--r", "2",
            "--delta", "1,0", "--c2", "1", "--H", "1,1",
        )
        assert code == 2


class TestWalls:
    def test_f0_walls(self, capsys):
        code, out = run(
            capsys, "walls", "--surface", "f0", "--r", "2",
            "--delta", "1,0", "--c2", "2",
        )
        assert code == 0
        assert "(7 walls)" in out
        assert "chambers: 8" in out
        assert "distinct fixed-locus variants: 2" in out

    def test_p2_has_no_walls(self, capsys):
        code, out = run(
            capsys, "walls", "--surface", "p2", "--r", "2",
            "--delta", "1", "--c2", "2",
        )
        assert code == 0
        assert "no walls" in out


class TestBracket:
    def test_small_suite(self, capsys):
        code, out = run(
            capsys, "bracket", "--max-k", "1", "--max-degree", "2",
            "--surface", "p2",
        )
        assert code == 0
        assert "PASS" in out


class TestDumpGolden:
    def test_listing(self, capsys):
        code, out = run(capsys, "dump-golden")
        assert code == 0
        lines = [l for l in out.splitlines() if l.strip()]
        assert sum("p2-" in l or "f0-" in l or "f1-" in l or "f2-" in l for l in lines) == 16

    def test_single_case_json(self, capsys):
        code, out = run(capsys, "dump-golden", "--case", "p2-r4-c2-3", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["id"] == "p2-r4-c2-3"

    def test_typo_annotation(self, capsys):
        code, out = run(capsys, "dump-golden", "--case", "p2-r4-c2-3")
        assert code == 0
        assert "recorded in source as" in out
