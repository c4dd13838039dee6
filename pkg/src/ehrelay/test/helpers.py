from __future__ import annotations

import json

from functools import wraps
from pathlib import Path
from typing import Any, Callable

from click.testing import CliRunner

from .._runner import ResultRow
from .._settings.load import CONFIG_ENV_VAR
from .._writer import parse_csv


def read(filename: str | Path) -> str:
    return Path(filename).read_text()


def write(path: str | Path, contents: str) -> None:
    """
    Create a file with given contents including any missing parent directories
    """
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(contents)


def read_rows(path: str | Path) -> list[ResultRow]:
    """
    Parse a CSV result file written by one of the commands.
    """
    return parse_csv(read(path))


def read_records(path: str | Path) -> list[dict[str, Any]]:
    records: list[dict[str, Any]] = json.loads(read(path))
    return records


def with_isolated_runner(fn: Callable[..., Any]) -> Callable[..., Any]:
    """
    Run *fn* in an empty directory, with ``$EHRELAY_CONFIG`` unset, and pass
    the runner as the kwarg *runner*.
    """

    @wraps(fn)
    def test(*args: Any, **kw: Any) -> Any:
        runner = CliRunner(env={CONFIG_ENV_VAR: None})
        with runner.isolated_filesystem():
            return fn(*args, runner=runner, **kw)

    return test
