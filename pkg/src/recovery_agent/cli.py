"""Command-line entry points for recovery-agent."""

from __future__ import annotations

import importlib.metadata
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar

import click

from recovery_agent.commands.doctor import DoctorCommandError
from recovery_agent.commands.doctor import run_doctor as run_doctor_impl
from recovery_agent.commands.list_scenarios import list_scenarios as list_scenarios_impl
from recovery_agent.commands.run import RunCommandError, build_episode_config, run_episode_command
from recovery_agent.commands.suite import SuiteCommandError, ablate_command, suite_command
from recovery_agent.config import load_config
from recovery_agent.corpus import ScenarioCorpus, default_corpus
from recovery_agent.harness.report import REPORT_FORMATS, dump_report
from recovery_agent.utils.logger import level_for, setup_logging

F = TypeVar("F", bound=Callable[..., Any])

_STATUS_STYLE: dict[str, tuple[str, str | None]] = {
    "PASS": ("✓", "green"),
    "FAIL": ("✗", "red"),
    "WARNING": ("⚠", "yellow"),
    "INFO": ("ℹ", "blue"),
}


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option(
    "--verbose",
    "-v",
    count=True,
    help="Increase verbosity (can be used multiple times: -v for INFO, -vv for DEBUG)",
)
@click.option("--quiet", "-q", is_flag=True, help="Suppress console output except errors")
@click.option("--no-color", is_flag=True, help="Disable colored output")
@click.pass_context
def cli(ctx: click.Context, verbose: int, quiet: bool, no_color: bool) -> None:
    """Run an embodied household agent with failure recovery in a grid kitchen.

    recovery-agent turns instruction dialogues into subgoal plans, executes them
    in a deterministic simulator and recovers from failed subgoals through a
    chain of reasoning stages. Suites and ablations report success rates.

    Examples:
        recovery-agent list
        recovery-agent run coffee-hand-occupied
        recovery-agent ablate --out ablation.json
    """
    if quiet and verbose > 0:
        raise click.UsageError("--quiet and --verbose are mutually exclusive")

    config = load_config()

    setup_logging(level=level_for(verbose, quiet, config.log_level), log_file=config.log_file, console=not quiet)

    ctx.ensure_object(dict)
    ctx.obj["config"] = config
    ctx.obj["no_color"] = no_color


def _echo(ctx: click.Context, message: str, fg: str | None = None, err: bool = False, bold: bool = False) -> None:
    if fg and not ctx.obj.get("no_color"):
        click.secho(message, fg=fg, err=err, bold=bold)
    else:
        click.echo(message, err=err)


def _fail(ctx: click.Context, error: Exception | str) -> None:
    if not ctx.obj.get("no_color"):
        click.secho("✗ Error:", fg="red", err=True, nl=False)
        click.echo(f" {error}", err=True)
    else:
        click.echo(f"✗ Error: {error}", err=True)
    ctx.exit(1)


def _header(ctx: click.Context, title: str) -> None:
    _echo(ctx, f"\n━━━ {title} ━━━\n", fg="blue", bold=True)


def run_options(func: F) -> F:
    """Options shared by run, suite and ablate."""
    options = [
        click.option(
            "--stages",
            default="all",
            show_default=True,
            help="Enabled recovery stages: all, none, or a list such as s1,s3",
        ),
        click.option("--no-search", is_flag=True, help="Disable the search for unknown objects"),
        click.option("--backend", type=click.Choice(["scripted", "http"]), help="Reasoner backend"),
        click.option("--endpoint", help="Chat-completion endpoint for the http backend"),
        click.option("--model", help="Model name for the http backend"),
        click.option("--max-actions", type=int, help="Action budget per episode"),
        click.option("--max-failures", type=int, help="Failure budget per episode"),
        click.option("--seed", type=int, help="Seed for the exploration order (0 keeps the fixed order)"),
        click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write the result to a file"),
        click.option(
            "--format",
            "output_format",
            type=click.Choice(list(REPORT_FORMATS)),
            help="Result format (default: from --out suffix, or a summary on stdout)",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _episode_config(ctx: click.Context, options: dict[str, Any], trace_dir: Path | None = None) -> Any:
    try:
        return build_episode_config(
            ctx.obj["config"],
            stages=options["stages"],
            search=not options["no_search"],
            backend=options["backend"],
            endpoint=options["endpoint"],
            model=options["model"],
            max_actions=options["max_actions"],
            max_failures=options["max_failures"],
            seed=options["seed"],
            trace_dir=trace_dir,
        )
    except ValueError as e:
        raise click.BadParameter(str(e)) from e


def _print_dump(payload: dict[str, Any], output_format: str | None, out: Path | None) -> bool:
    """Print a payload when a format was asked for and nothing was written."""
    if out is None and output_format is not None:
        click.echo(dump_report(payload, output_format), nl=False)
        return True
    return False


@cli.command()
def version() -> None:
    """Show the installed package version."""
    click.echo(_read_package_version())


@cli.command()
@click.argument("episode")
@run_options
@click.option(
    "--trace-dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Write the low-level action trace as JSON lines",
)
@click.pass_context
def run(ctx: click.Context, episode: str, trace_dir: Path | None, **options: Any) -> None:
    """Run one episode.

    EPISODE is an episode file or the id of a corpus scenario.

    Example:
        recovery-agent run coffee-hand-occupied --stages s1,s3
    """
    episode_config = _episode_config(ctx, options, trace_dir)
    out, output_format = options["out"], options["output_format"]

    try:
        outcome = run_episode_command(episode, episode_config, out=out, output_format=output_format)
    except RunCommandError as e:
        _fail(ctx, e)
        return

    result = outcome["result"]
    if _print_dump(result, output_format, out):
        return

    summary = f"Episode {result['episode_id']}: {result['satisfied']}/{result['total']} goal conditions"
    if result["success"]:
        _echo(ctx, f"✓ {summary}", fg="green")
    else:
        _echo(ctx, f"✗ {summary} ({result['termination']})", fg="yellow")
    click.echo(f"  Task: {result['task']}")
    click.echo(f"  Actions: {result['actions_taken']} ({result['failed_actions']} failed)")
    click.echo(f"  PLW SR: {result['plw_sr']:.3f}  PLW GC: {result['plw_gc']:.3f}")
    click.echo(f"  Recoveries: {len(result['recoveries'])}, stage 4 rounds: {result['stage4_rounds']}")
    if result["error"]:
        click.echo(f"  Note: {result['error']}")
    if outcome["out"]:
        click.echo(f"  Written: {outcome['out']}")


def _print_aggregate(ctx: click.Context, report: dict[str, Any]) -> None:
    agg = report["aggregate"]
    _echo(ctx, f"✓ {agg['successes']}/{agg['episodes']} episodes succeeded", fg="green")
    click.echo(f"  SR: {agg['sr']:.3f}  GC: {agg['gc']:.3f}  PLW SR: {agg['plw_sr']:.3f}  PLW GC: {agg['plw_gc']:.3f}")
    for episode in report["episodes"]:
        mark = "✓" if episode["success"] else "✗"
        click.echo(f"  {mark} {episode['episode_id']:<32} {episode['satisfied']}/{episode['total']}  {episode['termination']}")


@cli.command()
@click.argument("directory", required=False, type=click.Path(exists=True, file_okay=False, path_type=Path))
@run_options
@click.option("--workers", type=int, help="Episodes to run concurrently")
@click.pass_context
def suite(ctx: click.Context, directory: Path | None, workers: int | None, **options: Any) -> None:
    """Run every episode of DIRECTORY (default: the scenario corpus).

    Example:
        recovery-agent suite --stages none --out none.yaml
    """
    episode_config = _episode_config(ctx, options)
    out, output_format = options["out"], options["output_format"]
    try:
        outcome = suite_command(episode_config, directory, workers or ctx.obj["config"].workers, out, output_format)
    except SuiteCommandError as e:
        _fail(ctx, e)
        return

    if _print_dump(outcome["report"], output_format, out):
        return
    _header(ctx, f"Suite ({episode_config.stages.label}, search {'on' if episode_config.stages.search else 'off'})")
    _print_aggregate(ctx, outcome["report"])
    if outcome["out"]:
        click.echo(f"\nReport written to {outcome['out']}")


@cli.command()
@click.argument("directory", required=False, type=click.Path(exists=True, file_okay=False, path_type=Path))
@run_options
@click.option("--workers", type=int, help="Episodes to run concurrently")
@click.pass_context
def ablate(ctx: click.Context, directory: Path | None, workers: int | None, **options: Any) -> None:
    """Run the ablation matrix over DIRECTORY (default: the scenario corpus).

    The --stages and --no-search options are ignored; every row sets its own.

    Example:
        recovery-agent ablate --out ablation.json
    """
    episode_config = _episode_config(ctx, options)
    out, output_format = options["out"], options["output_format"]
    try:
        outcome = ablate_command(episode_config, directory, workers or ctx.obj["config"].workers, out, output_format)
    except SuiteCommandError as e:
        _fail(ctx, e)
        return

    if _print_dump(outcome["report"], output_format, out):
        return
    _header(ctx, "Ablation")
    header = f"{'Setting':<12} {'SR':>7} {'GC':>7} {'PLW SR':>8} {'PLW GC':>8}"
    click.echo(header)
    click.echo("-" * len(header))
    for row in outcome["report"]["rows"]:
        agg = row["aggregate"]
        click.echo(f"{row['name']:<12} {agg['sr']:>7.3f} {agg['gc']:>7.3f} {agg['plw_sr']:>8.3f} {agg['plw_gc']:>8.3f}")
    if outcome["out"]:
        click.echo(f"\nReport written to {outcome['out']}")


@cli.command(name="list")
@click.argument("directory", required=False, type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--verbose", is_flag=True, help="Show detailed information")
@click.option(
    "--format",
    type=click.Choice(["table", "json", "yaml"]),
    default="table",
    help="Output format",
)
@click.pass_context
def list_scenarios(ctx: click.Context, directory: Path | None, verbose: bool, format: str) -> None:  # noqa: A002
    """List scenarios of DIRECTORY (default: shipped and user scenarios)."""
    corpus = ScenarioCorpus([directory]) if directory is not None else default_corpus()
    if not list_scenarios_impl(corpus, verbose=verbose, output_format=format):
        click.echo("No scenarios found.")


@cli.command()
@click.option("--offline", is_flag=True, help="Do not contact the reasoner endpoint")
@click.pass_context
def doctor(ctx: click.Context, offline: bool) -> None:
    """Check the installation and configuration.

    Checks performed:
    - Python version (>= 3.10 required)
    - Config file validity
    - Prompt templates
    - Demonstration pool and search examples
    - Scenario corpus loadability
    - Reasoner endpoint reachability (http backend only)

    Example:
        recovery-agent doctor
    """
    config = ctx.obj["config"]

    try:
        result = run_doctor_impl(config, verify_endpoint=not offline)
    except DoctorCommandError as e:
        _fail(ctx, e)
        return

    _header(ctx, "Diagnostics")
    for check in result["checks"]:
        symbol, color = _STATUS_STYLE.get(check["status"], ("•", None))
        _echo(ctx, f"  {symbol} {check['name']}: {check['message']}", fg=color)
        if check.get("details") and check["status"] in ("FAIL", "WARNING"):
            click.echo(f"      → {check['details']}")

    _echo(ctx, "\n━━━ Summary ━━━", fg="blue", bold=True)
    total = result["passed"] + result["failed"] + result["warnings"]
    if result["passed"] > 0:
        _echo(ctx, f"  ✓ Passed: {result['passed']}/{total}", fg="green")
    if result["warnings"] > 0:
        _echo(ctx, f"  ⚠ Warnings: {result['warnings']}/{total}", fg="yellow")
    if result["failed"] > 0:
        _echo(ctx, f"  ✗ Failed: {result['failed']}/{total}", fg="red")
    click.echo()

    if result["failed"] > 0:
        _echo(ctx, "Some checks failed. Please address the issues above.", fg="red", err=True)
        ctx.exit(1)
    elif result["warnings"] > 0:
        _echo(ctx, "All critical checks passed with some warnings.", fg="yellow")
    else:
        _echo(ctx, "✓ All checks passed.", fg="green")


def _read_package_version() -> str:
    """Return the installed package version, falling back to static metadata."""
    try:
        return importlib.metadata.version("recovery-agent")
    except importlib.metadata.PackageNotFoundError:
        from recovery_agent import __version__

        return __version__


def main(argv: list[str] | None = None) -> None:
    """Execute the CLI entry point."""
    try:
        code = cli.main(args=argv, prog_name="recovery-agent", standalone_mode=False)  # type: ignore[attr-defined,unused-ignore]
    except click.BadParameter as e:
        click.echo(f"Error: {e.format_message()}", err=True)
        raise SystemExit(2) from None
    except click.ClickException as e:
        e.show()
        raise SystemExit(e.exit_code) from None
    if isinstance(code, int) and code != 0:
        raise SystemExit(code)


if __name__ == "__main__":  # pragma: no cover - convenience entry point
    main()
