"""Unit tests for CLI commands."""

from __future__ import annotations

import json
import shutil
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from recovery_agent import cli
from recovery_agent.utils.paths import get_package_data_path


@pytest.fixture  # type: ignore[misc]
def suite_dir(tmp_path: Path) -> Path:
    """A directory holding two shipped scenarios."""
    directory = tmp_path / "suite"
    directory.mkdir()
    for scenario_id in ("make-coffee", "coffee-hand-occupied"):
        shutil.copy(get_package_data_path("scenarios", f"{scenario_id}.yaml"), directory)
    return directory


class TestCLIBasics:
    """Test basic CLI functionality."""

    def test_cli_help(self) -> None:
        """Test that CLI shows help."""
        result = CliRunner().invoke(cli.cli, ["--help"])
        assert result.exit_code == 0
        assert "failure recovery" in result.output
        for command in ("run", "suite", "ablate", "list", "doctor", "version"):
            assert command in result.output

    def test_quiet_and_verbose_conflict(self) -> None:
        """Test that --quiet and --verbose are exclusive."""
        result = CliRunner().invoke(cli.cli, ["-q", "-v", "list"])
        assert result.exit_code == 2
        assert "mutually exclusive" in result.output


class TestListCommand:
    """Test list command."""

    def test_table(self) -> None:
        """Test the default table of shipped scenarios."""
        result = CliRunner().invoke(cli.cli, ["-q", "list"])
        assert result.exit_code == 0
        assert "coffee-hand-occupied" in result.output
        assert "stage2" in result.output

    def test_json(self, suite_dir: Path) -> None:
        """Test machine-readable listing of a directory."""
        result = CliRunner().invoke(cli.cli, ["-q", "list", str(suite_dir), "--format", "json"])
        assert result.exit_code == 0
        entries = json.loads(result.output)
        assert [e["id"] for e in entries] == ["coffee-hand-occupied", "make-coffee"]
        assert entries[0]["requires"] == ["stage2"]

    def test_verbose(self, suite_dir: Path) -> None:
        """Test the detailed listing."""
        result = CliRunner().invoke(cli.cli, ["-q", "list", str(suite_dir), "--verbose"])
        assert result.exit_code == 0
        assert "Needs recovery: yes" in result.output

    def test_empty_directory(self, tmp_path: Path) -> None:
        """Test listing a directory without scenarios."""
        result = CliRunner().invoke(cli.cli, ["-q", "list", str(tmp_path)])
        assert result.exit_code == 0
        assert "No scenarios found." in result.output


class TestRunCommand:
    """Test run command."""

    def test_run_scenario_id(self) -> None:
        """Test running a shipped scenario by id."""
        result = CliRunner().invoke(cli.cli, ["-q", "run", "coffee-hand-occupied"])
        assert result.exit_code == 0
        assert "✓ Episode coffee-hand-occupied" in result.output
        assert "Task: Make coffee" in result.output

    def test_run_without_recovery_fails_episode(self) -> None:
        """Test that a failed episode is reported but is not a command error."""
        result = CliRunner().invoke(cli.cli, ["-q", "--no-color", "run", "coffee-hand-occupied", "--stages", "none"])
        assert result.exit_code == 0
        assert "✗ Episode coffee-hand-occupied" in result.output

    def test_run_json(self) -> None:
        """Test printing the result as JSON."""
        result = CliRunner().invoke(cli.cli, ["-q", "run", "make-coffee", "--format", "json"])
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["episode_id"] == "make-coffee"
        assert payload["success"] is True

    def test_run_file_with_outputs(self, suite_dir: Path, tmp_path: Path) -> None:
        """Test an episode file with result and trace files."""
        out = tmp_path / "result.yaml"
        traces = tmp_path / "traces"
        result = CliRunner().invoke(
            cli.cli,
            ["-q", "run", str(suite_dir / "make-coffee.yaml"), "--out", str(out), "--trace-dir", str(traces)],
        )
        assert result.exit_code == 0
        assert f"Written: {out}" in result.output
        written = yaml.safe_load(out.read_text(encoding="utf-8"))
        assert written["episode"]["episode_id"] == "make-coffee"
        assert written["configuration"]["backend"] == "scripted"
        assert (traces / "make-coffee.jsonl").read_text(encoding="utf-8").count("\n") == written["episode"]["actions_taken"]

    def test_unknown_scenario(self) -> None:
        """Test that an unknown id is an error."""
        result = CliRunner().invoke(cli.cli, ["-q", "run", "juggling"])
        assert result.exit_code == 1
        assert "not found" in result.output

    @pytest.mark.parametrize(  # type: ignore[misc]
        "args",
        [["--stages", "s9"], ["--max-actions", "0"], ["--backend", "telepathy"]],
    )
    def test_bad_options(self, args: list[str]) -> None:
        """Test option validation."""
        result = CliRunner().invoke(cli.cli, ["-q", "run", "make-coffee", *args])
        assert result.exit_code == 2


class TestSuiteCommands:
    """Test suite and ablate commands."""

    def test_suite(self, suite_dir: Path) -> None:
        """Test the suite summary."""
        result = CliRunner().invoke(cli.cli, ["-q", "suite", str(suite_dir)])
        assert result.exit_code == 0
        assert "2/2 episodes succeeded" in result.output
        assert "Suite (s1,s2,s3,s4, search on)" in result.output

    def test_suite_report_file(self, suite_dir: Path, tmp_path: Path) -> None:
        """Test writing the suite report."""
        out = tmp_path / "reports" / "none.json"
        result = CliRunner().invoke(cli.cli, ["-q", "suite", str(suite_dir), "--stages", "none", "--out", str(out)])
        assert result.exit_code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["aggregate"]["successes"] == 1
        assert report["configuration"]["stages"]["s1"] is False

    def test_suite_empty_directory(self, tmp_path: Path) -> None:
        """Test that an empty suite is an error."""
        result = CliRunner().invoke(cli.cli, ["-q", "suite", str(tmp_path)])
        assert result.exit_code == 1
        assert "No episodes found" in result.output

    def test_ablate(self, suite_dir: Path) -> None:
        """Test the ablation table."""
        result = CliRunner().invoke(cli.cli, ["-q", "ablate", str(suite_dir), "--workers", "2"])
        assert result.exit_code == 0
        for name in ("full", "w/o s1", "w/o s2&4", "w/o search", "none"):
            assert name in result.output

    def test_ablate_yaml(self, suite_dir: Path) -> None:
        """Test printing the ablation report as YAML."""
        result = CliRunner().invoke(cli.cli, ["-q", "ablate", str(suite_dir), "--format", "yaml"])
        assert result.exit_code == 0
        report = yaml.safe_load(result.output)
        rows = {row["name"]: row["aggregate"]["successes"] for row in report["rows"]}
        assert rows["full"] == 2
        assert rows["w/o s2"] == 1
        assert rows["w/o s3"] == 2


class TestDoctorCommand:
    """Test doctor command."""

    def test_offline(self) -> None:
        """Test diagnostics of a default installation."""
        result = CliRunner().invoke(cli.cli, ["-q", "--no-color", "doctor", "--offline"])
        assert result.exit_code == 0
        assert "✓ Demonstration Pool" in result.output
        assert "All checks passed." in result.output

    def test_failed_check_exits_nonzero(self, isolated_dirs: Path) -> None:
        """Test that a failing check sets the exit code."""
        config_dir = isolated_dirs / "config" / "recovery-agent"
        config_dir.mkdir(parents=True)
        (config_dir / "config.yaml").write_text("- broken\n", encoding="utf-8")
        result = CliRunner().invoke(cli.cli, ["-q", "--no-color", "doctor", "--offline"])
        assert result.exit_code == 1
        assert "✗ Config File" in result.output
