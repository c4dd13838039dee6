# See LICENSE for details.

"""
Run the acceptance criteria and report on them.
"""

from __future__ import annotations

import json
import sys

from typing import Sequence

import click

from jinja2 import Template

from ._acceptance import CRITERIA, run_criteria
from ._settings import ConfigError, check_output_path, read_template
from ._writer import write_output


@click.command(name="validate")
@click.option(
    "--quick",
    "quick",
    default=False,
    flag_value=True,
    help="Cut the Monte-Carlo budgets tenfold.",
)
@click.option(
    "--only",
    multiple=True,
    type=click.IntRange(min(CRITERIA), max(CRITERIA)),
    metavar="N",
    help="Run only criterion N. Repeat for several.",
)
@click.option(
    "--format",
    "fmt",
    default="text",
    type=click.Choice(["text", "json"]),
    help="Report format.",
)
@click.option("--seed", default=0, type=int, help="Seed of the random streams.")
@click.option(
    "--output",
    default="-",
    metavar="PATH",
    help="Write the report to PATH; '-' is standard output.",
)
def _main(
    quick: bool, only: Sequence[int], fmt: str, seed: int, output: str
) -> None:
    """
    Check the special functions, the closed forms and the simulator against
    each other.  Exits with status 1 when any criterion fails.
    """
    try:
        passed = __main(quick, only, fmt, seed, output)
    except ConfigError as e:
        click.echo(f"ehrelay: {e}", err=True)
        sys.exit(e.exit_code)
    if not passed:
        sys.exit(1)


def __main(
    quick: bool, only: Sequence[int], fmt: str, seed: int, output: str
) -> bool:
    check_output_path(output)
    to_err = output == "-"

    click.echo("Running acceptance criteria...", err=to_err)
    report = run_criteria(quick=quick, only=list(only) or None, seed=seed)

    if fmt == "json":
        content = json.dumps(report.as_record(), indent=2) + "\n"
    else:
        template = Template(read_template("validate.txt"), trim_blocks=True)
        content = template.render(
            mode=report.mode, quick=report.quick, results=report.results
        )

    write_output(content, output)
    click.echo("Done!" if report.passed else "Some criteria failed.", err=to_err)
    return report.passed


if __name__ == "__main__":  # pragma: no cover
    _main()
