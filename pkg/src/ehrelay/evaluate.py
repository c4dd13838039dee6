# See LICENSE for details.

"""
Evaluate the analytic outage of the configured schemes at one point.
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
)
from ._runner import evaluate
from ._settings import ConfigError
from ._writer import render, write_output


@click.command(name="analytic")
@config_option
@parameter_options
@output_options
def _main(config_file: str | None, **options: Any) -> None:
    """
    Evaluate closed-form outage probabilities.

    Schemes without a closed form (the battery schemes) get an empty
    analytic column.
    """
    try:
        return __main(config_file, options)
    except ConfigError as e:
        click.echo(f"ehrelay: {e}", err=True)
        sys.exit(e.exit_code)


def __main(config_file: str | None, options: dict[str, Any]) -> None:
    overrides = collect_overrides(options)
    config = resolve_config(config_file, overrides)
    to_err = config.output == "-"

    click.echo("Loading configuration...", err=to_err)
    params = config.system_params()
    cfg = config.trial_config()
    ctl = config.series_control()

    click.echo("Evaluating closed forms...", err=to_err)
    rows = [
        evaluate(kind, params, config.gamma_db, "analytic", cfg, ctl)
        for kind in config.scheme_kinds()
    ]

    click.echo("Writing results...", err=to_err)
    write_output(render(rows, config.format), config.output)
    click.echo("Done!", err=to_err)


if __name__ == "__main__":  # pragma: no cover
    _main()
