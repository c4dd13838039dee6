"""
Provides ehrelay version information.
"""

# This file is auto-generated! Do not edit!
# Use `python -m incremental.update ehrelay` to change this file.

from incremental import Version


__version__ = Version("ehrelay", 1, 0, 0)
# The version is exposed in string format to be
# available for the hatching build tools.
_hatchling_version = __version__.short()

__all__ = ["__version__", "_hatchling_version"]
