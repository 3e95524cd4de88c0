"""Command-line interface: one subcommand per stage plus a full run.

Exit codes: 0 on success, 1 on data errors (a diagnostics file lands
in the run directory), 2 on usage errors such as a bad configuration
or a missing prior-stage artifact.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Callable, Optional

import click

from . import __version__
from .errors import DataError, UsageError
from .pipeline import STAGES, load_run_config, run_all, run_stage

_STAGE_HELP = {
    "ingest": "Parse profile fixtures and bibliographic inputs.",
    "vocab": "Build the discipline keyword vocabulary.",
    "discover": "Snowball the author community from the vocabulary.",
    "classify": "Label discovered profiles specialist or occasional.",
    "rank": "Pool, deduplicate, and rank documents.",
    "network": "Build co-publication graphs and centrality scores.",
    "report": "Emit the table, series, and graph bundle.",
}


def _shared_options(fn: Callable) -> Callable:
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(path_type=Path),
            default=None,
            help="INI configuration file.",
        ),
        click.option(
            "--out",
            type=click.Path(path_type=Path),
            envvar="MADAP_OUT",
            default=None,
            help="Output root directory (env MADAP_OUT).",
        ),
        click.option(
            "--fixtures",
            type=click.Path(path_type=Path),
            default=None,
            help="Directory of profile page fixtures.",
        ),
        click.option("--top-n", type=int, default=None, help="Highly cited document count."),
        click.option(
            "--top-docs-per-author",
            type=int,
            default=None,
            help="Documents taken per specialist.",
        ),
        click.option(
            "--binary",
            is_flag=True,
            default=False,
            help="Flatten network edge weights to 1.",
        ),
        click.option("--max-rounds", type=int, default=None, help="Discovery round limit."),
        click.option("--workers", type=int, default=None, help="Worker thread count."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _invoke(stage: Optional[str], **opts) -> None:
    try:
        cfg = load_run_config(
            config_path=opts["config_path"],
            fixtures=opts["fixtures"],
            out=opts["out"],
            top_n=opts["top_n"],
            top_docs_per_author=opts["top_docs_per_author"],
            binary=True if opts["binary"] else None,
            max_rounds=opts["max_rounds"],
            workers=opts["workers"],
        )
        if stage is None:
            run_dir = run_all(cfg, progress=lambda name: click.echo(f"{name}: done"))
        else:
            run_dir = run_stage(stage, cfg)
            click.echo(f"{stage}: done")
        click.echo(f"artifacts: {run_dir}")
    except UsageError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except DataError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@click.group(help="Map an academic discipline from profile and citation data.")
@click.version_option(__version__)
def main() -> None:
    pass


def _stage_command(stage: str) -> None:
    @main.command(name=stage, help=_STAGE_HELP[stage])
    @_shared_options
    def command(**opts) -> None:
        _invoke(stage, **opts)


for _stage in STAGES:
    _stage_command(_stage)


@main.command(name="run", help="Run every stage in order.")
@_shared_options
def run_command(**opts) -> None:
    _invoke(None, **opts)
