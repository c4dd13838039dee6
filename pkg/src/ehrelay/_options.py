# See LICENSE for details.

"""
Command line options shared by the sub-commands, and the merge of those
options into the loaded configuration.
"""

from __future__ import annotations

from typing import Any, Callable, TypeVar

import click

from ._settings import (
    Config,
    ConfigError,
    check_config,
    config_option_help,
    load_config_from_options,
)


F = TypeVar("F", bound=Callable[..., Any])

# Flag destination -> configuration key, where they differ.
_FLAG_KEYS = {
    "scheme": "schemes",
    "relays": "n_relays",
    "battery_db": "gamma_b_max_db",
}


def _stack(*options: Callable[[F], F]) -> Callable[[F], F]:
    def decorator(func: F) -> F:
        for option in reversed(options):
            func = option(func)
        return func

    return decorator


config_option = click.option(
    "--config",
    "config_file",
    default=None,
    metavar="FILE_PATH",
    help=config_option_help,
)

parameter_options = _stack(
    click.option(
        "--scheme",
        multiple=True,
        metavar="NAME",
        help=(
            "Relay selection scheme: eps, tps, ops, ehb-df or ehb-af. "
            "tps:RHO fixes the splitting ratio. Repeat for several schemes."
        ),
    ),
    click.option(
        "--gamma-db", type=float, default=None, help="Transmit SNR P/N0 in dB."
    ),
    click.option(
        "--eta", type=float, default=None, help="Energy conversion efficiency."
    ),
    click.option("--rate", type=float, default=None, help="Target rate in bit/s/Hz."),
    click.option("--relays", type=int, default=None, help="Number of relays."),
    click.option("--rho", type=float, default=None, help="Fixed PSR of a bare tps."),
    click.option(
        "--sigma-si2",
        default=None,
        metavar="VALUES",
        help="Mean source-relay gain, one value or one per relay (comma separated).",
    ),
    click.option(
        "--sigma-id2",
        default=None,
        metavar="VALUES",
        help="Mean relay-destination gain, one value or one per relay.",
    ),
    click.option(
        "--battery-db", type=float, default=None, help="Battery cap P_b^max/N0 in dB."
    ),
)

trial_options = _stack(
    click.option(
        "--trials", type=int, default=None, help="Monte-Carlo slots per point."
    ),
    click.option(
        "--warmup",
        type=int,
        default=None,
        help="Slots discarded at the start of every battery trajectory.",
    ),
    click.option(
        "--chains", type=int, default=None, help="Independent battery trajectories."
    ),
    click.option("--seed", type=int, default=None, help="Seed of the random streams."),
    click.option(
        "--confidence", type=float, default=None, help="Confidence level of intervals."
    ),
    click.option(
        "--workers", type=int, default=None, help="Worker processes for Monte-Carlo."
    ),
)

mode_option = click.option(
    "--mode",
    default=None,
    metavar="MODE",
    help="analytic, simulate or both.",
)

output_options = _stack(
    click.option(
        "--output",
        default=None,
        metavar="PATH",
        help="Write results to PATH; '-' is standard output (the default).",
    ),
    click.option(
        "--format", "format", default=None, metavar="FORMAT", help="csv or json."
    ),
)


def _channel_means(key: str, text: str) -> float | list[float]:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(
            f"`{key}` must be a number or a comma separated list of numbers.",
            failing_option=key,
        ) from None
    return values[0] if len(values) == 1 else values


def collect_overrides(options: dict[str, Any]) -> dict[str, Any]:
    """
    Map the flags that were given onto configuration keys.
    """
    overrides: dict[str, Any] = {}
    for name, value in options.items():
        if value is None or value == ():
            continue
        key = _FLAG_KEYS.get(name, name)
        if key == "schemes":
            value = list(value)
        elif key in ("sigma_si2", "sigma_id2"):
            value = _channel_means(key, value)
        overrides[key] = value
    return overrides


def resolve_config(
    config_file: str | None, overrides: dict[str, Any], check_output: bool = True
) -> Config:
    """
    Defaults, then the configuration file, then the flags; validated.
    """
    _path, config = load_config_from_options(config_file)
    return check_config(config.replace(**overrides), check_output=check_output)
