# See LICENSE for details.

"""
Entry point of the command line interface.

Each sub-command has its separate CLI definition and help messages.
"""

from __future__ import annotations

import click

from click_default_group import DefaultGroup

from ._version import __version__
from .evaluate import _main as _analytic_cmd
from .figure import _main as _figure_cmd
from .simulate import _main as _simulate_cmd
from .sweep import _main as _sweep_cmd
from .validate import _main as _validate_cmd


@click.group(cls=DefaultGroup, default="analytic", default_if_no_args=True)
@click.version_option(__version__.public())
def cli() -> None:
    """
    ehrelay evaluates relay selection schemes for energy harvesting
    amplify-and-forward and decode-and-forward networks.

    Relays power their forwarding hop from the source signal, splitting each
    received sample between the harvester and the decoder.  The tool computes
    outage probabilities in closed form where one exists, estimates them by
    Monte-Carlo simulation everywhere, and checks the two against each other.
    """
    pass


cli.add_command(_analytic_cmd)
cli.add_command(_simulate_cmd)
cli.add_command(_sweep_cmd)
cli.add_command(_figure_cmd)
cli.add_command(_validate_cmd)
