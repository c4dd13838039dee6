"""Subpackage to handle settings parsing."""

from __future__ import annotations

from ehrelay._settings import load


Config = load.Config
ConfigError = load.ConfigError
UnknownSchemeError = load.UnknownSchemeError
OutputError = load.OutputError
load_config = load.load_config
load_config_from_file = load.load_config_from_file
load_config_from_options = load.load_config_from_options
check_config = load.check_config
check_output_path = load.check_output_path
read_template = load.read_template

# Help message for --config CLI option, shared by all sub-commands.
config_option_help = (
    "Pass a custom config file at FILE_PATH. "
    f"Default: the file named by ${load.CONFIG_ENV_VAR}, else ehrelay.toml, "
    "else the [tool.ehrelay] table of pyproject.toml."
)

__all__ = [
    "Config",
    "ConfigError",
    "OutputError",
    "UnknownSchemeError",
    "check_config",
    "check_output_path",
    "config_option_help",
    "load_config",
    "load_config_from_file",
    "load_config_from_options",
    "read_template",
]
