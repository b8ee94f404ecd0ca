"""Command-line interface tests, run in-process through main()."""

import json

import pytest

from polynomiogram import cli
from polynomiogram.density import load_polygrid
from polynomiogram.validate import Check, SuiteReport

SMALL_CONFIG = """
[family]
kind = cubic

[plan]
count = 200
seed = 11
domain1 = segment -3 0 3 0
domain2 = segment -3 0 3 0

[grid]
width = 32
height = 32

[run]
workers = 1
"""


def _write(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestRoots:
    def test_quadratic(self, capsys):
        assert cli.main(["roots", "--", "-1", "0", "1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "re=-1.0 im=0.0 residual=0.000e+00"
        assert lines[1] == "re=1.0 im=0.0 residual=0.000e+00"

    def test_sorted_by_real_then_imag(self, capsys):
        assert cli.main(["roots", "1", "0", "0", "0", "1"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        parsed = [
            (float(ln.split()[0][3:]), float(ln.split()[1][3:])) for ln in out
        ]
        assert parsed == sorted(parsed)

    def test_complex_coefficient(self, capsys):
        assert cli.main(["roots", "--engine", "aberth", "1j", "1"]) == 0
        out = capsys.readouterr().out
        assert "im=-1.0" in out

    def test_bad_coefficient(self, capsys):
        assert cli.main(["roots", "one", "1"]) == cli.EXIT_CONFIG
        assert "bad coefficient" in capsys.readouterr().err

    def test_constant_rejected(self, capsys):
        assert cli.main(["roots", "5"]) == cli.EXIT_CONFIG

    def test_zero_polynomial_rejected(self, capsys):
        assert cli.main(["roots", "0", "0"]) == cli.EXIT_CONFIG


class TestPreset:
    def test_known(self, capsys):
        assert cli.main(["preset", "kac50"]) == 0
        out = capsys.readouterr().out
        assert "preset=kac50" in out and "degree=50" in out

    def test_unknown(self, capsys):
        assert cli.main(["preset", "nope"]) == cli.EXIT_CONFIG
        assert "unknown preset" in capsys.readouterr().err

    def test_print_config_parses(self, capsys):
        from polynomiogram.config import parse_config

        assert cli.main(["preset", "hibiscus", "--print-config"]) == 0
        cfg = parse_config(capsys.readouterr().out)
        assert cfg.image_path == "hibiscus.png"


class TestRender:
    def test_end_to_end_outputs(self, tmp_path, capsys):
        text = SMALL_CONFIG + (
            f"\n[output]\nimage = {tmp_path}/out.png\n"
            f"grid_dump = {tmp_path}/out.polygrid\n"
            f"roots_csv = {tmp_path}/roots.csv\n"
        )
        path = _write(tmp_path, text)
        assert cli.main(["render", str(path)]) == 0
        out = capsys.readouterr().out
        assert "samples=200" in out and "failed=0" in out

        grid = load_polygrid((tmp_path / "out.polygrid").read_text())
        assert grid.total_in > 0
        assert (tmp_path / "out.png").stat().st_size > 0
        csv_lines = (tmp_path / "roots.csv").read_text().splitlines()
        assert csv_lines[0] == "re,im,sample_index"
        assert len(csv_lines) == 1 + 3 * 200  # cubic: 3 roots per sample

    def test_repeat_runs_byte_identical(self, tmp_path, capsys):
        text = SMALL_CONFIG + f"\n[output]\ngrid_dump = {tmp_path}/a.polygrid\n"
        path = _write(tmp_path, text)
        assert cli.main(["render", str(path)]) == 0
        first = (tmp_path / "a.polygrid").read_bytes()
        assert cli.main(["render", str(path)]) == 0
        assert (tmp_path / "a.polygrid").read_bytes() == first
        capsys.readouterr()

    def test_missing_config_file(self, tmp_path, capsys):
        assert cli.main(["render", str(tmp_path / "absent.ini")]) == cli.EXIT_IO

    def test_config_error_names_key(self, tmp_path, capsys):
        path = _write(tmp_path, SMALL_CONFIG.replace("count = 200", "count = 0"))
        assert cli.main(["render", str(path)]) == cli.EXIT_CONFIG
        assert "plan.count" in capsys.readouterr().err

    def test_seed_override_changes_grid(self, tmp_path, capsys):
        text = SMALL_CONFIG + f"\n[output]\ngrid_dump = {tmp_path}/g.polygrid\n"
        path = _write(tmp_path, text)
        assert cli.main(["render", str(path)]) == 0
        base = (tmp_path / "g.polygrid").read_bytes()
        assert cli.main(["render", str(path), "--seed", "99"]) == 0
        assert (tmp_path / "g.polygrid").read_bytes() != base
        capsys.readouterr()

    def test_bad_seed_override(self, tmp_path, capsys):
        path = _write(tmp_path, SMALL_CONFIG)
        assert cli.main(["render", str(path), "--seed", "-5"]) == cli.EXIT_CONFIG


class TestValidate:
    def test_lucas_small(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert cli.main(["validate", "lucas", "--n", "8"]) == 0
        out = capsys.readouterr().out
        assert "result=pass" in out
        report = json.loads((tmp_path / "validate_lucas.json").read_text())
        assert report["passed"] is True
        assert report["suite"] == "lucas"

    def test_json_path_flag(self, tmp_path, capsys):
        target = tmp_path / "r.json"
        assert cli.main(["validate", "lucas", "--n", "4", "--json", str(target)]) == 0
        assert json.loads(target.read_text())["passed"] is True
        capsys.readouterr()

    def test_failing_suite_exits_4(self, tmp_path, capsys, monkeypatch):
        def fake_suite(n=32, bits=53):
            return SuiteReport(
                suite="lucas",
                checks=[Check("max_error", 1.0, "<= 1e-06", False)],
            )

        monkeypatch.setattr(cli.validate, "lucas_suite", fake_suite)
        target = tmp_path / "fail.json"
        assert cli.main(["validate", "lucas", "--json", str(target)]) == cli.EXIT_METRIC
        assert json.loads(target.read_text())["passed"] is False
        capsys.readouterr()

    def test_unknown_suite_rejected(self, capsys):
        with pytest.raises(SystemExit):
            cli.main(["validate", "bogus"])
        capsys.readouterr()


class TestParser:
    def test_no_command(self, capsys):
        with pytest.raises(SystemExit):
            cli.main([])
        capsys.readouterr()

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--version"])
        assert exc.value.code == 0
        capsys.readouterr()
