# See LICENSE for details.

"""
Sweep one parameter for the configured schemes.
"""

from __future__ import annotations

import sys

from typing import Any

import click

from ._options import (
    collect_overrides,
    config_option,
    mode_option,
    output_options,
    parameter_options,
    resolve_config,
    trial_options,
)
from ._runner import ResultRow, curve
from ._settings import ConfigError
from ._writer import render, write_output
from .mc import SweepAxis, sweep_point


def _parse_values(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(
            f"Invalid sweep values {text!r}; expected comma separated numbers.",
            failing_option="values",
        ) from None
    if not values:
        raise ConfigError("No sweep values given.", failing_option="values")
    return values


@click.command(name="sweep")
@click.option(
    "--axis",
    required=True,
    type=click.Choice([axis.value for axis in SweepAxis]),
    help="The parameter to sweep.",
)
@click.option(
    "--values",
    "values_text",
    required=True,
    metavar="V1,V2,...",
    help="Comma separated axis values (dB for gamma_db).",
)
@config_option
@parameter_options
@trial_options
@mode_option
@output_options
def _main(
    axis: str, values_text: str, config_file: str | None, **options: Any
) -> None:
    """
    Evaluate outage along one axis: gamma_db, eta, rate, n_relays or
    rho_fixed (TPS only).
    """
    try:
        return __main(SweepAxis(axis), values_text, config_file, options)
    except ConfigError as e:
        click.echo(f"ehrelay: {e}", err=True)
        sys.exit(e.exit_code)


def __main(
    axis: SweepAxis, values_text: str, config_file: str | None, options: dict[str, Any]
) -> None:
    values = _parse_values(values_text)
    overrides = collect_overrides(options)
    config = resolve_config(config_file, overrides)
    to_err = config.output == "-"

    click.echo("Loading configuration...", err=to_err)
    params = config.system_params()
    cfg = config.trial_config()
    ctl = config.series_control()
    kinds = config.scheme_kinds()

    for kind in kinds:
        for value in values:
            try:
                sweep_point(kind, params, axis, value)
            except ValueError as e:
                raise ConfigError(
                    f"Invalid {axis.value} value {value!r}: {e}",
                    failing_option="values",
                ) from None

    rows: list[ResultRow] = []
    for kind in kinds:
        click.echo(f"Sweeping {kind.label} over {axis.value}...", err=to_err)
        rows.extend(
            curve(kind, params, config.gamma_db, axis, values, config.mode, cfg, ctl)
        )

    click.echo("Writing results...", err=to_err)
    write_output(render(rows, config.format), config.output)
    click.echo("Done!", err=to_err)


if __name__ == "__main__":  # pragma: no cover
    _main()
