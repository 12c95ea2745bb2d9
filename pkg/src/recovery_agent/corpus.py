"""Discovery of shipped and user-authored scenarios."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from recovery_agent.harness.episode import EpisodeFileError, EpisodeSpec, load_episode
from recovery_agent.utils.logger import get_logger
from recovery_agent.utils.paths import get_package_data_path, get_user_scenarios_dir

__all__ = ["CorpusError", "ScenarioCorpus", "ScenarioNotFoundError", "default_corpus"]

logger = get_logger(__name__)

SCENARIO_SUFFIXES = (".yaml", ".yml")


class CorpusError(Exception):
    """Base exception for scenario corpus operations."""


class ScenarioNotFoundError(CorpusError):
    """Raised when a scenario id is not in the corpus."""


class ScenarioCorpus:
    """Index of episode files found in one or more directories.

    Later directories shadow earlier ones on id clashes, so a user scenario can
    replace a shipped one of the same name. Only files directly inside each
    directory are considered; world files referenced by episodes may live in
    subdirectories.
    """

    def __init__(self, directories: Iterable[Path]) -> None:
        """Initialize the corpus.

        Args:
            directories: Directories to scan, lowest precedence first. Missing
                directories are skipped.
        """
        self.directories = [Path(d) for d in directories]

    def _files(self) -> dict[str, Path]:
        found: dict[str, Path] = {}
        for directory in self.directories:
            if not directory.is_dir():
                logger.debug(f"Scenario directory does not exist: {directory}")
                continue
            for path in sorted(directory.iterdir()):
                if path.is_file() and path.suffix in SCENARIO_SUFFIXES:
                    if path.stem in found:
                        logger.debug(f"Scenario {path.stem} from {path} shadows {found[path.stem]}")
                    found[path.stem] = path
        return found

    def ids(self) -> list[str]:
        """Return the sorted scenario ids."""
        return sorted(self._files())

    def path_of(self, scenario_id: str) -> Path:
        """Return the file of a scenario.

        Raises:
            ScenarioNotFoundError: If the id is unknown.
        """
        files = self._files()
        if scenario_id not in files:
            logger.warning(f"Scenario not found: {scenario_id}")
            raise ScenarioNotFoundError(f"Scenario '{scenario_id}' not found in corpus")
        return files[scenario_id]

    def get(self, scenario_id: str) -> EpisodeSpec:
        """Load one scenario by id.

        Raises:
            ScenarioNotFoundError: If the id is unknown.
            EpisodeFileError: If the file is invalid.
        """
        return load_episode(self.path_of(scenario_id))

    def load_all(self) -> list[EpisodeSpec]:
        """Load every scenario, sorted by id.

        Raises:
            EpisodeFileError: On the first invalid file.
        """
        specs = [load_episode(path) for _, path in sorted(self._files().items())]
        logger.debug(f"Loaded {len(specs)} scenarios")
        return specs

    def list_scenarios(self) -> list[dict[str, Any]]:
        """Summaries for listings; invalid files are reported rather than raised."""
        entries: list[dict[str, Any]] = []
        for scenario_id, path in sorted(self._files().items()):
            try:
                spec = load_episode(path)
            except EpisodeFileError as e:
                logger.warning(f"Skipping invalid scenario {path}: {e}")
                entries.append({"id": scenario_id, "status": "invalid", "error": str(e), "path": str(path)})
                continue
            entries.append(
                {
                    "id": spec.id,
                    "title": spec.title,
                    "task": spec.task.task,
                    "split": spec.split,
                    "reference_length": spec.reference_length,
                    "requires": list(spec.annotations.requires),
                    "needs_recovery": spec.annotations.needs_recovery,
                    "status": "ok",
                    "path": str(path),
                }
            )
        return entries


def default_corpus(extra: Sequence[Path] = ()) -> ScenarioCorpus:
    """The shipped scenarios, then the user scenario directory, then ``extra``."""
    return ScenarioCorpus([get_package_data_path("scenarios"), get_user_scenarios_dir(), *extra])
