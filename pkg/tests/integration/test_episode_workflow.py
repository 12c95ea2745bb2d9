"""Integration tests for the explore, plan, execute and recover pipeline."""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

import pytest

from recovery_agent.corpus import ScenarioCorpus
from recovery_agent.harness.episode import EpisodeConfig, EpisodeSpec, run_episode
from recovery_agent.reasoner.scripted import ScriptedReasoner
from recovery_agent.recovery import StageFlags
from recovery_agent.tasks import TaskSpec
from recovery_agent.utils.paths import get_package_data_path


@pytest.fixture  # type: ignore[misc]
def corpus() -> ScenarioCorpus:
    """The shipped scenarios only."""
    return ScenarioCorpus([get_package_data_path("scenarios")])


class TestEpisodeWorkflow:
    """Test whole episodes with the scripted backend."""

    def test_recovered_episode(self, corpus: ScenarioCorpus) -> None:
        """Test an occupied hand recovered by a missing-precondition prefix."""
        reasoner = ScriptedReasoner()
        result = run_episode(corpus.get("coffee-hand-occupied"), reasoner=reasoner)

        assert result.success
        assert result.termination == "completed"
        assert (result.satisfied, result.total) == (result.total, result.total)
        assert result.plan == ["Pick_up(Mug_1)", "Place(Mug_1,CoffeeMachine_1)", "Toggle_on(CoffeeMachine_1)"]
        first = result.recoveries[0]
        assert first["subgoal"] == "Pick_up(Mug_1)"
        assert first["verdict"] == "retry_after"
        assert first["stages"] == [1, 2]
        assert result.stage_flow["stage2"] >= 1
        assert result.failed_actions > 0
        assert 0.0 < result.plw_sr <= 1.0
        assert result.plw_gc == result.plw_sr

        templates = [template_id.value for template_id, _ in reasoner.calls]
        assert templates[0] == "plan"
        assert templates[1:3] == ["stage1", "stage2"]

    def test_without_recovery(self, corpus: ScenarioCorpus) -> None:
        """Test that the same episode fails with every stage disabled."""
        result = run_episode(corpus.get("coffee-hand-occupied"), EpisodeConfig(stages=StageFlags.parse("none")))
        assert not result.success
        assert result.termination == "completed"
        assert result.recoveries[0] == {"subgoal": "Pick_up(Mug_1)", "depth": 0, "verdict": "give_up", "stages": [], "steps": []}
        assert all(r["verdict"] == "give_up" for r in result.recoveries)
        assert result.stage4_rounds == 0
        assert result.satisfied < result.total

    def test_stage4_completes_plan(self, corpus: ScenarioCorpus) -> None:
        """Test that post-execution reflection adds the step the plan left out."""
        result = run_episode(corpus.get("remotes-in-box"))
        assert result.success
        assert result.stage4_rounds >= 1
        assert any(r["stages"] == [4] and r["steps"] for r in result.recoveries)

    def test_action_budget(self, corpus: ScenarioCorpus) -> None:
        """Test that running out of actions ends the episode."""
        result = run_episode(corpus.get("make-coffee"), EpisodeConfig(max_actions=5))
        assert result.termination == "max_actions"
        assert result.actions_taken == 5
        assert not result.success
        assert result.plan == []

    def test_failure_budget(self, corpus: ScenarioCorpus) -> None:
        """Test that running out of failures ends the episode."""
        result = run_episode(corpus.get("coffee-hand-occupied"), EpisodeConfig(max_failures=1))
        assert result.termination == "max_failures"
        assert result.failed_actions >= 1
        assert not result.success

    def test_plan_error(self, corpus: ScenarioCorpus) -> None:
        """Test that an unusable planner answer is reported, not raised."""
        spec = corpus.get("make-coffee")
        broken = replace(spec, planner_reply={"task": "Juggle", "subgoals": []})
        result = run_episode(broken)
        assert result.termination == "plan_error"
        assert result.error is not None
        assert "Unknown task" in result.error
        assert result.actions_taken > 0
        assert not result.success

    def test_task_override(self, corpus: ScenarioCorpus) -> None:
        """Test that goals come from the override rather than the episode."""
        result = run_episode(corpus.get("water-plant"), EpisodeConfig(task_override=TaskSpec("Make coffee")))
        assert result.task == "Make coffee"
        assert not result.success

    def test_trace_export(self, corpus: ScenarioCorpus, tmp_path: Path) -> None:
        """Test the JSONL trace written next to the result."""
        result = run_episode(corpus.get("make-coffee"), EpisodeConfig(trace_dir=tmp_path))
        lines = (tmp_path / "make-coffee.jsonl").read_text(encoding="utf-8").splitlines()
        assert len(lines) == result.actions_taken
        records = [json.loads(line) for line in lines]
        assert [r["step"] for r in records] == list(range(1, len(records) + 1))
        assert sum(1 for r in records if not r["success"]) == result.failed_actions
        assert any(r["subgoal"] == "explore" for r in records)

    def test_deterministic(self, corpus: ScenarioCorpus) -> None:
        """Test that two runs of one episode are identical."""
        spec: EpisodeSpec = corpus.get("lettuce-walled-knife")
        assert run_episode(spec).to_dict() == run_episode(spec).to_dict()

    def test_per_subgoal_counting(self, corpus: ScenarioCorpus) -> None:
        """Test that per-subgoal failure counting still completes a recovered episode."""
        config = EpisodeConfig()
        config.budgets = replace(config.budgets, failure_counting="per_subgoal")
        result = run_episode(corpus.get("coffee-machine-occupied"), config)
        assert result.success

    def test_failure_reasons(self, corpus: ScenarioCorpus) -> None:
        """Test that failed subgoal executions are counted by reason."""
        result = run_episode(corpus.get("coffee-hand-occupied"))
        assert result.failure_reasons["holding_other_object"] >= 1
        assert result.to_dict()["failure_reasons"] == result.failure_reasons
        clean = run_episode(corpus.get("make-coffee"))
        assert clean.failure_reasons == {}

    def test_seeded_exploration(self, corpus: ScenarioCorpus, tmp_path: Path) -> None:
        """Test that the seed reaches the exploration sweep and stays reproducible."""
        spec = corpus.get("make-coffee")
        first = run_episode(spec, EpisodeConfig(seed=3, trace_dir=tmp_path / "a"))
        second = run_episode(spec, EpisodeConfig(seed=3, trace_dir=tmp_path / "b"))
        assert first.success
        assert first.to_dict() == second.to_dict()
        assert (tmp_path / "a" / "make-coffee.jsonl").read_text(encoding="utf-8") == (
            tmp_path / "b" / "make-coffee.jsonl"
        ).read_text(encoding="utf-8")
