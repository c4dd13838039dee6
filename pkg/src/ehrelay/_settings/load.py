# See LICENSE for details.

from __future__ import annotations

import dataclasses
import os
import sys

from dataclasses import dataclass, field
from typing import Any, Mapping

from ..mc import TrialConfig
from ..model import SystemParams
from ..schemes import SchemeKind, UnknownScheme
from ..specfun import SeriesControl


if sys.version_info < (3, 9):
    import importlib_resources as resources
else:
    from importlib import resources


if sys.version_info < (3, 11):
    import tomli as tomllib
else:
    import tomllib


CONFIG_ENV_VAR = "EHRELAY_CONFIG"

FORMATS = ("csv", "json")
MODES = ("analytic", "simulate", "both")


@dataclass
class Config:
    # Defaults are the numerical setup used throughout the evaluation:
    # 15 dB SNR, eta = 0.5, R = 1, six relays with unit channel means and a
    # 30 dB battery cap.
    schemes: list[str] = field(default_factory=lambda: ["eps", "ops"])
    gamma_db: float = 15.0
    eta: float = 0.5
    rate: float = 1.0
    n_relays: int = 6
    sigma_si2: float | list[float] = 1.0
    sigma_id2: float | list[float] = 1.0
    gamma_b_max_db: float = 30.0
    rho: float = 0.5
    trials: int = 100_000
    warmup: int = 1000
    chains: int = 8
    seed: int = 0
    confidence: float = 0.99
    workers: int = 1
    output: str = "-"
    format: str = "csv"
    mode: str = "both"
    series_terms: int = 60
    series_rel_tol: float = 1e-12

    def replace(self, **changes: Any) -> Config:
        return dataclasses.replace(self, **changes)

    def system_params(self) -> SystemParams:
        try:
            return SystemParams.from_db(
                gamma_db=self.gamma_db,
                eta=self.eta,
                rate=self.rate,
                n_relays=self.n_relays,
                sigma_si2=self.sigma_si2,
                sigma_id2=self.sigma_id2,
                gamma_b_max_db=self.gamma_b_max_db,
            )
        except ValueError as e:
            raise ConfigError(str(e), failing_option=_option_for(str(e))) from None

    def trial_config(self) -> TrialConfig:
        try:
            return TrialConfig(
                trials=self.trials,
                warmup=self.warmup,
                seed=self.seed,
                chains=self.chains,
                confidence=self.confidence,
                workers=self.workers,
            )
        except ValueError as e:
            raise ConfigError(str(e), failing_option=_option_for(str(e))) from None

    def scheme_kinds(self) -> list[SchemeKind]:
        if not self.schemes:
            raise ConfigError(
                "At least one scheme is needed.", failing_option="schemes"
            )
        kinds = []
        for name in self.schemes:
            try:
                kinds.append(SchemeKind.parse(name, rho=self.rho))
            except UnknownScheme as e:
                raise UnknownSchemeError(str(e), failing_option="schemes") from None
            except ValueError as e:
                raise ConfigError(str(e), failing_option="rho") from None
        return kinds

    def series_control(self) -> SeriesControl:
        try:
            return SeriesControl(
                max_terms=self.series_terms, rel_tol=self.series_rel_tol
            )
        except ValueError as e:
            option = "series_terms" if "max_terms" in str(e) else "series_rel_tol"
            raise ConfigError(str(e), failing_option=option) from None


class ConfigError(Exception):
    exit_code = 2

    def __init__(self, *args: str, **kwargs: str):
        self.failing_option = kwargs.get("failing_option")
        super().__init__(*args)


class UnknownSchemeError(ConfigError):
    exit_code = 3


class OutputError(ConfigError):
    exit_code = 4


_FIELDS = {f.name: f for f in dataclasses.fields(Config)}
_INTEGER_KEYS = {
    "n_relays",
    "trials",
    "warmup",
    "chains",
    "seed",
    "workers",
    "series_terms",
}
_STRING_KEYS = {"output", "format", "mode"}
_CHANNEL_KEYS = {"sigma_si2", "sigma_id2"}


def _option_for(message: str) -> str | None:
    # Value objects name the offending field first in their messages.
    if message.startswith("at least one relay"):
        return "n_relays"
    word = message.split(" ", 1)[0]
    aliases = {"gamma": "gamma_db", "gamma_b_max": "gamma_b_max_db"}
    if word in _FIELDS or word in aliases:
        return aliases.get(word, word)
    return None


def load_config_from_options(config_path: str | None) -> tuple[str | None, Config]:
    """
    Find and load the configuration file.

    The file named on the command line wins, then the one named by the
    EHRELAY_CONFIG environment variable, then ``ehrelay.toml`` and finally the
    ``[tool.ehrelay]`` table of ``pyproject.toml`` in the working directory.
    Without any of them the defaults are returned and the path is None.
    """
    if config_path is None:
        config_path = os.environ.get(CONFIG_ENV_VAR) or None

    if config_path is not None:
        config_path = os.path.abspath(config_path)
        if not os.path.isfile(config_path):
            raise ConfigError(
                f"Configuration file '{config_path}' does not exist.",
                failing_option="config",
            )
        return config_path, load_config_from_file(config_path)

    config = load_config(os.getcwd())
    if config is None:
        return None, Config()
    return config


def load_config(directory: str) -> tuple[str, Config] | None:
    ehrelay_toml = os.path.join(directory, "ehrelay.toml")
    pyproject_toml = os.path.join(directory, "pyproject.toml")

    if os.path.exists(ehrelay_toml):
        return ehrelay_toml, load_config_from_file(ehrelay_toml)
    if os.path.exists(pyproject_toml):
        with open(pyproject_toml, "rb") as conffile:
            document = _parse(conffile.read(), pyproject_toml)
        table = document.get("tool", {}).get("ehrelay")
        if table is None:
            return None
        return pyproject_toml, parse_toml(table)
    return None


def _parse(data: bytes, path: str) -> dict[str, Any]:
    try:
        return tomllib.loads(data.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as e:
        raise ConfigError(
            f"Could not parse '{path}': {e}", failing_option="all"
        ) from None


def load_config_from_file(config_file: str) -> Config:
    """
    Load a configuration file.  ``pyproject.toml`` style files keep their
    keys under ``[tool.ehrelay]``; anything else is a flat key = value list.
    """
    with open(config_file, "rb") as conffile:
        document = _parse(conffile.read(), config_file)

    if os.path.basename(config_file) == "pyproject.toml" or "tool" in document:
        try:
            document = document["tool"]["ehrelay"]
        except KeyError:
            raise ConfigError(
                "No [tool.ehrelay] section.", failing_option="all"
            ) from None

    return parse_toml(document)


def _is_number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def parse_toml(config: Mapping[str, Any]) -> Config:
    values: dict[str, Any] = {}
    for key, value in config.items():
        if key not in _FIELDS:
            raise ConfigError(
                f"Unknown configuration key `{key}`.", failing_option=key
            )

        if key == "schemes":
            if isinstance(value, str):
                value = [value]
            if not isinstance(value, list) or not all(
                isinstance(v, str) for v in value
            ):
                raise ConfigError(
                    "`schemes` must be a scheme name or a list of them.",
                    failing_option=key,
                )
        elif key in _CHANNEL_KEYS:
            if isinstance(value, list):
                if not all(_is_number(v) for v in value):
                    raise ConfigError(
                        f"`{key}` must be a number or a list of numbers.",
                        failing_option=key,
                    )
                value = [float(v) for v in value]
            elif _is_number(value):
                value = float(value)
            else:
                raise ConfigError(
                    f"`{key}` must be a number or a list of numbers.",
                    failing_option=key,
                )
        elif key in _INTEGER_KEYS:
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(
                    f"`{key}` must be an integer.", failing_option=key
                )
        elif key in _STRING_KEYS:
            if not isinstance(value, str):
                raise ConfigError(f"`{key}` must be a string.", failing_option=key)
        elif _is_number(value):
            value = float(value)
        else:
            raise ConfigError(f"`{key}` must be a number.", failing_option=key)

        values[key] = value

    return Config(**values)


def check_config(config: Config, check_output: bool = True) -> Config:
    """
    Validate everything up front, so that no computation starts on a
    configuration that would fail halfway.
    """
    if config.format not in FORMATS:
        raise ConfigError(
            f"Unknown output format `{config.format}`; "
            f"expected one of {', '.join(FORMATS)}.",
            failing_option="format",
        )
    if config.mode not in MODES:
        raise ConfigError(
            f"Unknown mode `{config.mode}`; expected one of {', '.join(MODES)}.",
            failing_option="mode",
        )
    config.scheme_kinds()
    config.system_params()
    config.trial_config()
    config.series_control()
    if check_output:
        check_output_path(config.output)
    return config


def check_output_path(output: str) -> None:
    if output == "-":
        return
    path = os.path.abspath(output)
    parent = os.path.dirname(path)
    if os.path.isdir(path):
        raise OutputError(
            f"Output path '{output}' is a directory.", failing_option="output"
        )
    if not os.path.isdir(parent):
        raise OutputError(
            f"Output directory '{parent}' does not exist.", failing_option="output"
        )
    target = path if os.path.exists(path) else parent
    if not os.access(target, os.W_OK):
        raise OutputError(
            f"Output path '{output}' is not writable.", failing_option="output"
        )


def read_template(name: str) -> str:
    """
    Read a template shipped in ``ehrelay/templates``.
    """
    resource = resources.files("ehrelay") / "templates" / name
    if not resource.is_file():
        raise ConfigError(f"ehrelay does not have a template named '{name}'.")
    return resource.read_text("utf-8")
