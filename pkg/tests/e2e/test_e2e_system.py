"""E2E system tests for recovery-agent.

Drive the installed CLI through user configuration, user scenarios, single
runs, suites and ablations, checking the files each step leaves behind.
The live test talks to a real chat-completion endpoint and only runs when
RECOVERY_AGENT_ENDPOINT is set.
"""

from __future__ import annotations

import json
import os
import shutil
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from recovery_agent import cli
from recovery_agent.utils.paths import get_package_data_path


def _user_dirs(home: Path) -> tuple[Path, Path]:
    config_dir = home / "config" / "recovery-agent"
    scenarios_dir = home / "data" / "recovery-agent" / "scenarios"
    config_dir.mkdir(parents=True)
    scenarios_dir.mkdir(parents=True)
    return config_dir, scenarios_dir


class TestUserWorkflow:
    """Test a user's session from configuration to ablation report."""

    def test_user_scenario_and_config(self, isolated_dirs: Path, tmp_path: Path) -> None:
        """Test that user config and a user scenario drive every command."""
        config_dir, scenarios_dir = _user_dirs(isolated_dirs)
        reports = tmp_path / "reports"
        (config_dir / "config.yaml").write_text(
            yaml.safe_dump({"budgets": {"max_failures": 25}, "workers": 2, "reports_dir": str(reports)}),
            encoding="utf-8",
        )
        scenario = yaml.safe_load(get_package_data_path("scenarios", "coffee-hand-occupied.yaml").read_text("utf-8"))
        scenario["id"] = "my-coffee"
        (scenarios_dir / "my-coffee.yaml").write_text(yaml.safe_dump(scenario), encoding="utf-8")
        runner = CliRunner()

        listed = runner.invoke(cli.cli, ["-q", "list", "--format", "json"])
        assert listed.exit_code == 0
        assert "my-coffee" in [entry["id"] for entry in json.loads(listed.output)]

        doctor = runner.invoke(cli.cli, ["-q", "--no-color", "doctor", "--offline"])
        assert doctor.exit_code == 0
        assert "✓ Config File" in doctor.output

        run = runner.invoke(cli.cli, ["-q", "run", "my-coffee", "--format", "json"])
        assert run.exit_code == 0
        result = json.loads(run.output)
        assert result["success"] is True
        assert result["recoveries"][0]["verdict"] == "retry_after"

        failed = runner.invoke(cli.cli, ["-q", "run", "my-coffee", "--stages", "s1,s3,s4", "--format", "json"])
        assert failed.exit_code == 0
        assert json.loads(failed.output)["success"] is False

    def test_suite_then_ablation(self, tmp_path: Path) -> None:
        """Test a suite report and an ablation report over the same directory."""
        suite_dir = tmp_path / "suite"
        suite_dir.mkdir()
        for scenario_id in ("water-plant", "lettuce-walled-knife", "toast-bread-cabinet"):
            shutil.copy(get_package_data_path("scenarios", f"{scenario_id}.yaml"), suite_dir)
        suite_out = tmp_path / "out" / "suite.yaml"
        ablation_out = tmp_path / "out" / "ablation.json"
        runner = CliRunner()

        suite = runner.invoke(cli.cli, ["-q", "suite", str(suite_dir), "--out", str(suite_out), "--workers", "3"])
        assert suite.exit_code == 0
        report = yaml.safe_load(suite_out.read_text(encoding="utf-8"))
        assert report["aggregate"]["successes"] == 3

        ablation = runner.invoke(cli.cli, ["-q", "ablate", str(suite_dir), "--out", str(ablation_out)])
        assert ablation.exit_code == 0
        rows = {row["name"]: row for row in json.loads(ablation_out.read_text(encoding="utf-8"))["rows"]}
        assert rows["full"]["aggregate"]["successes"] == 3
        assert rows["w/o s3"]["aggregate"]["successes"] == 2
        assert rows["w/o search"]["aggregate"]["successes"] == 2
        assert rows["none"]["aggregate"]["successes"] == 2
        assert rows["full"]["episodes"] == report["episodes"]


@pytest.mark.live  # type: ignore[misc]
class TestLiveEndpoint:
    """Test the HTTP backend against a real endpoint."""

    def test_episode_against_endpoint(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
        """Test that a live model can finish an episode without recovery."""
        endpoint = os.environ.get("RECOVERY_AGENT_ENDPOINT")
        if not endpoint:
            pytest.skip("RECOVERY_AGENT_ENDPOINT is not set")
        model = os.environ.get("RECOVERY_AGENT_MODEL", "gpt-4o")
        if api_key := os.environ.get("RECOVERY_AGENT_LIVE_API_KEY"):
            monkeypatch.setenv("RECOVERY_AGENT_API_KEY", api_key)

        out = tmp_path / "live.json"
        result = CliRunner().invoke(
            cli.cli,
            ["-q", "run", "make-coffee", "--backend", "http", "--endpoint", endpoint, "--model", model, "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        written = json.loads(out.read_text(encoding="utf-8"))
        assert written["configuration"]["backend"] == "http"
        assert written["episode"]["termination"] in {"completed", "max_actions", "max_failures", "plan_error"}
