# See LICENSE for details.

from incremental import Version
from twisted.trial.unittest import TestCase

from .._version import __version__, _hatchling_version


class TestPackaging(TestCase):
    def test_version(self):
        """
        The build backend reads the same version the CLI reports.
        """
        self.assertIsInstance(__version__, Version)
        self.assertEqual(_hatchling_version, __version__.short())

    def test_public_api(self):
        import ehrelay

        for name in ehrelay.__all__:
            self.assertTrue(hasattr(ehrelay, name), name)
