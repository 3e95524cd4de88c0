"""Tests for the command-line interface: subcommands, overrides, exit codes."""

from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

from madap.cli import main
from madap.pipeline import STAGES

REPO = Path(__file__).resolve().parent.parent
DEMO_CONFIG = REPO / "demo" / "config.ini"


@pytest.fixture()
def runner() -> CliRunner:
    return CliRunner()


def test_help_lists_every_stage_and_run(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for stage in STAGES:
        assert f"\n  {stage}" in result.output
    assert "\n  run" in result.output


def test_version_flag(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0


def test_console_script_installed():
    proc = subprocess.run(
        ["madap", "--help"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "run" in proc.stdout


def test_run_executes_all_stages(runner, tmp_path):
    result = runner.invoke(
        main, ["run", "--config", str(DEMO_CONFIG), "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    for stage in STAGES:
        assert f"{stage}: done" in result.output
    assert "artifacts:" in result.output
    run_dir = tmp_path / result.output.rsplit("artifacts: ", 1)[1].strip().split("/")[-1]
    assert (run_dir / "manifest.json").is_file()


def test_single_stage_subcommand(runner, tmp_path):
    result = runner.invoke(
        main, ["ingest", "--config", str(DEMO_CONFIG), "--out", str(tmp_path)]
    )
    assert result.exit_code == 0, result.output
    assert "ingest: done" in result.output


def test_out_env_var_sets_output_root(runner, tmp_path):
    result = runner.invoke(
        main,
        ["ingest", "--config", str(DEMO_CONFIG)],
        env={"MADAP_OUT": str(tmp_path)},
    )
    assert result.exit_code == 0, result.output
    assert any(p.is_dir() for p in tmp_path.iterdir())


def test_missing_config_is_usage_error(runner, tmp_path):
    result = runner.invoke(main, ["run", "--config", str(tmp_path / "nope.ini")])
    assert result.exit_code == 2
    assert "error:" in result.stderr


def test_unknown_config_key_is_usage_error(runner, tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[discipline]\nturbo = yes\n", encoding="utf-8")
    result = runner.invoke(main, ["run", "--config", str(bad)])
    assert result.exit_code == 2
    assert "error:" in result.stderr


def test_stage_out_of_order_is_usage_error(runner, tmp_path):
    result = runner.invoke(
        main, ["rank", "--config", str(DEMO_CONFIG), "--out", str(tmp_path)]
    )
    assert result.exit_code == 2
    assert "error:" in result.stderr


def test_malformed_page_is_data_error_with_diagnostics(runner, tmp_path):
    fixtures = tmp_path / "fixtures"
    fixtures.mkdir()
    (fixtures / "p99.html").write_text("<p>not a profile</p>", encoding="utf-8")
    out = tmp_path / "out"
    result = runner.invoke(
        main, ["ingest", "--fixtures", str(fixtures), "--out", str(out)]
    )
    assert result.exit_code == 1
    assert "error:" in result.stderr
    run_dirs = list(out.iterdir())
    assert len(run_dirs) == 1
    assert (run_dirs[0] / "diagnostics.txt").is_file()


def test_workers_flag_does_not_move_artifacts(runner, tmp_path):
    def run_dir_for(args):
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        return result.output.rsplit("artifacts: ", 1)[1].strip()

    base = ["ingest", "--config", str(DEMO_CONFIG), "--out", str(tmp_path)]
    assert run_dir_for(base + ["--workers", "1"]) == run_dir_for(base + ["--workers", "4"])


def test_top_n_flag_changes_run_identity(runner, tmp_path):
    def run_dir_for(args):
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        return result.output.rsplit("artifacts: ", 1)[1].strip()

    base = ["ingest", "--config", str(DEMO_CONFIG), "--out", str(tmp_path)]
    assert run_dir_for(base) != run_dir_for(base + ["--top-n", "5"])


def test_python_dash_m_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "madap", "--help"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
