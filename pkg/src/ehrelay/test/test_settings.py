# See LICENSE for details.

import os

from textwrap import dedent
from unittest import mock

from twisted.trial.unittest import TestCase

from .._settings import (
    Config,
    ConfigError,
    OutputError,
    UnknownSchemeError,
    check_config,
    load_config,
    load_config_from_file,
    load_config_from_options,
    read_template,
)
from .._settings.load import CONFIG_ENV_VAR, parse_toml
from ..mc import TrialConfig
from ..schemes import EHB_DF, tps
from .helpers import write


class TomlSettingsTests(TestCase):
    def mktemp_project(self, *, filename: str, contents: str) -> str:
        project_dir = self.mktemp()
        os.makedirs(project_dir)
        write(os.path.join(project_dir, filename), dedent(contents))
        return project_dir

    def test_base(self):
        """
        Values in [tool.ehrelay] override the defaults, the rest keep them.
        """
        project_dir = self.mktemp_project(
            filename="pyproject.toml",
            contents="""
            [tool.ehrelay]
            gamma_db = 10
            n_relays = 4
            schemes = ["ops", "tps:0.3"]
            """,
        )

        path, config = load_config(project_dir)
        self.assertEqual(path, os.path.join(project_dir, "pyproject.toml"))
        self.assertEqual(config.gamma_db, 10.0)
        self.assertIsInstance(config.gamma_db, float)
        self.assertEqual(config.n_relays, 4)
        self.assertEqual(config.eta, 0.5)
        self.assertEqual(config.trials, 100_000)
        self.assertEqual(config.scheme_kinds()[1], tps(0.3))

    def test_ehrelay_toml_preferred(self):
        project_dir = self.mktemp_project(
            filename="pyproject.toml",
            contents="""
            [tool.ehrelay]
            eta = 0.9
            """,
        )
        write(os.path.join(project_dir, "ehrelay.toml"), "eta = 0.3\n")

        path, config = load_config(project_dir)
        self.assertEqual(os.path.basename(path), "ehrelay.toml")
        self.assertEqual(config.eta, 0.3)

    def test_ehrelay_toml_with_tool_table(self):
        project_dir = self.mktemp_project(
            filename="ehrelay.toml",
            contents="""
            [tool.ehrelay]
            rate = 0.5
            """,
        )
        _path, config = load_config(project_dir)
        self.assertEqual(config.rate, 0.5)

    def test_pyproject_without_table(self):
        project_dir = self.mktemp_project(
            filename="pyproject.toml",
            contents="""
            [something.else]
            blah = 'baz'
            """,
        )
        self.assertIsNone(load_config(project_dir))

    def test_missing_table_in_named_file(self):
        """
        A pyproject.toml named explicitly must carry the table.
        """
        project_dir = self.mktemp_project(
            filename="pyproject.toml",
            contents="""
            [something.else]
            blah = 'baz'
            """,
        )
        with self.assertRaises(ConfigError) as e:
            load_config_from_file(os.path.join(project_dir, "pyproject.toml"))
        self.assertEqual(e.exception.failing_option, "all")

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as e:
            parse_toml({"gamma": 10})
        self.assertEqual(e.exception.failing_option, "gamma")

    def test_wrong_types(self):
        cases = [
            {"n_relays": 2.5},
            {"n_relays": True},
            {"eta": "high"},
            {"schemes": [1, 2]},
            {"sigma_si2": ["a"]},
            {"output": 3},
        ]
        for case in cases:
            with self.assertRaises(ConfigError) as e:
                parse_toml(case)
            self.assertEqual(e.exception.failing_option, next(iter(case)))

    def test_channel_means(self):
        config = parse_toml({"n_relays": 2, "sigma_si2": [1, 2], "sigma_id2": 3})
        params = config.system_params()
        self.assertEqual(params.sigma_si2, (1.0, 2.0))
        self.assertEqual(params.sigma_id2, (3.0, 3.0))

    def test_single_scheme_string(self):
        self.assertEqual(parse_toml({"schemes": "ehb-df"}).scheme_kinds(), [EHB_DF])

    def test_bad_toml(self):
        project_dir = self.mktemp_project(filename="ehrelay.toml", contents="eta = \n")
        with self.assertRaises(ConfigError) as e:
            load_config(project_dir)
        self.assertEqual(e.exception.failing_option, "all")


class OptionsTests(TestCase):
    def test_defaults_without_files(self):
        temp = self.mktemp()
        os.makedirs(temp)
        cwd = os.getcwd()
        os.chdir(temp)
        self.addCleanup(os.chdir, cwd)

        with mock.patch.dict(os.environ, {}, clear=False):
            os.environ.pop(CONFIG_ENV_VAR, None)
            path, config = load_config_from_options(None)
        self.assertIsNone(path)
        self.assertEqual(config, Config())

    def test_environment_variable(self):
        temp = self.mktemp()
        os.makedirs(temp)
        config_file = os.path.join(temp, "custom.toml")
        write(config_file, "seed = 11\n")

        with mock.patch.dict(os.environ, {CONFIG_ENV_VAR: config_file}):
            path, config = load_config_from_options(None)
        self.assertEqual(path, os.path.abspath(config_file))
        self.assertEqual(config.seed, 11)

    def test_explicit_path_wins(self):
        temp = self.mktemp()
        os.makedirs(temp)
        first = os.path.join(temp, "first.toml")
        second = os.path.join(temp, "second.toml")
        write(first, "seed = 1\n")
        write(second, "seed = 2\n")

        with mock.patch.dict(os.environ, {CONFIG_ENV_VAR: first}):
            _path, config = load_config_from_options(second)
        self.assertEqual(config.seed, 2)

    def test_missing_file(self):
        with self.assertRaises(ConfigError) as e:
            load_config_from_options(os.path.join(self.mktemp(), "nope.toml"))
        self.assertEqual(e.exception.failing_option, "config")


class CheckConfigTests(TestCase):
    def test_defaults_pass(self):
        config = check_config(Config())
        self.assertEqual(config.trial_config(), TrialConfig(trials=100_000))

    def test_failing_options(self):
        cases = [
            (Config(format="xml"), "format", ConfigError),
            (Config(mode="guess"), "mode", ConfigError),
            (Config(schemes=["mrc"]), "schemes", UnknownSchemeError),
            (Config(schemes=[]), "schemes", ConfigError),
            (Config(schemes=["tps"], rho=2.0), "rho", ConfigError),
            (Config(eta=0.0), "eta", ConfigError),
            (Config(n_relays=0), "n_relays", ConfigError),
            (Config(trials=0), "trials", ConfigError),
            (Config(confidence=1.5), "confidence", ConfigError),
            (Config(series_terms=1), "series_terms", ConfigError),
            (Config(series_rel_tol=2.0), "series_rel_tol", ConfigError),
        ]
        for config, option, error in cases:
            with self.assertRaises(error) as e:
                check_config(config)
            self.assertEqual(e.exception.failing_option, option, config)

    def test_exit_codes(self):
        self.assertEqual(ConfigError.exit_code, 2)
        self.assertEqual(UnknownSchemeError.exit_code, 3)
        self.assertEqual(OutputError.exit_code, 4)

    def test_output_checks(self):
        temp = self.mktemp()
        os.makedirs(temp)
        with self.assertRaises(OutputError):
            check_config(Config(output=temp))
        with self.assertRaises(OutputError):
            check_config(Config(output=os.path.join(temp, "missing", "out.csv")))
        check_config(Config(output=os.path.join(temp, "out.csv")))
        check_config(Config(output=temp), check_output=False)


class TemplateTests(TestCase):
    def test_read(self):
        self.assertIn("acceptance report", read_template("validate.txt"))

    def test_missing(self):
        with self.assertRaises(ConfigError):
            read_template("nothing.txt")
