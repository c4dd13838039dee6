# See LICENSE for details.

"""
Estimate the outage of the configured schemes at one point by Monte-Carlo.
"""

from __future__ import annotations

import sys

from typing import Any

import click

from ._options import (
    collect_overrides,
    config_option,
    output_options,
    parameter_options,
    resolve_config,
    trial_options,
)
from ._runner import evaluate
from ._settings import ConfigError
from ._writer import render, write_output


@click.command(name="simulate")
@config_option
@parameter_options
@trial_options
@output_options
@click.option(
    "--no-analytic",
    "no_analytic",
    default=False,
    flag_value=True,
    help="Leave the analytic column empty.",
)
def _main(config_file: str | None, no_analytic: bool, **options: Any) -> None:
    """
    Run Monte-Carlo outage estimates.

    Every scheme is simulated from the same seed, so the memoryless schemes
    see identical channel draws.
    """
    try:
        return __main(config_file, no_analytic, options)
    except ConfigError as e:
        click.echo(f"ehrelay: {e}", err=True)
        sys.exit(e.exit_code)


def __main(config_file: str | None, no_analytic: bool, options: dict[str, Any]) -> None:
    overrides = collect_overrides(options)
    config = resolve_config(config_file, overrides)
    to_err = config.output == "-"

    click.echo("Loading configuration...", err=to_err)
    params = config.system_params()
    cfg = config.trial_config()
    ctl = config.series_control()
    mode = "simulate" if no_analytic or config.mode == "simulate" else "both"

    rows = []
    for kind in config.scheme_kinds():
        click.echo(f"Simulating {kind.label}...", err=to_err)
        rows.append(evaluate(kind, params, config.gamma_db, mode, cfg, ctl))

    click.echo("Writing results...", err=to_err)
    write_output(render(rows, config.format), config.output)
    click.echo("Done!", err=to_err)


if __name__ == "__main__":  # pragma: no cover
    _main()
