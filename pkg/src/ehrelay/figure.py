# See LICENSE for details.

"""
Produce the data behind one of the evaluation figures.
"""

from __future__ import annotations

import sys

from typing import Any

import click

from ._figures import CAMPAIGNS, run_campaign
from ._options import (
    collect_overrides,
    config_option,
    mode_option,
    output_options,
    parameter_options,
    resolve_config,
    trial_options,
)
from ._settings import ConfigError
from ._writer import render, write_output


@click.command(name="figure")
@click.argument("number", type=click.IntRange(min(CAMPAIGNS), max(CAMPAIGNS)))
@config_option
@parameter_options
@trial_options
@mode_option
@output_options
def _main(number: int, config_file: str | None, **options: Any) -> None:
    """
    Emit the curves of figure NUMBER (3 to 10) as rows.

    The swept axis and the per-curve settings are fixed; every other
    parameter comes from the configuration.  Flags that the campaign sets
    itself (the scheme list, and the swept parameter) are ignored.
    """
    try:
        return __main(number, config_file, options)
    except ConfigError as e:
        click.echo(f"ehrelay: {e}", err=True)
        sys.exit(e.exit_code)


def __main(number: int, config_file: str | None, options: dict[str, Any]) -> None:
    overrides = collect_overrides(options)
    config = resolve_config(config_file, overrides)
    to_err = config.output == "-"

    click.echo("Loading configuration...", err=to_err)
    params = config.system_params()
    cfg = config.trial_config()
    ctl = config.series_control()

    click.echo(f"Running campaign {number}: {CAMPAIGNS[number].title}...", err=to_err)
    rows = run_campaign(number, params, config.gamma_db, config.mode, cfg, ctl)

    click.echo("Writing results...", err=to_err)
    write_output(render(rows, config.format), config.output)
    click.echo("Done!", err=to_err)


if __name__ == "__main__":  # pragma: no cover
    _main()
