from __future__ import annotations

from ehrelay._shell import cli


cli()
