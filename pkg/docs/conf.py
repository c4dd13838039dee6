#
# ehrelay documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

from datetime import date

from ehrelay._version import __version__ as ehrelay_version


extensions = []

# Add any paths that contain templates here, relative to this directory.
templates_path = ["_templates"]

source_suffix = ".rst"

# The master toctree document.
master_doc = "index"

# General information about the project.
_today = date.today()
project = "ehrelay"
copyright = "{}, ehrelay contributors. Ver {}".format(
    _today.year,
    ehrelay_version.public(),
)
author = "ehrelay contributors"

# The short X.Y version.
version = "{}.{}.{}".format(
    ehrelay_version.major, ehrelay_version.minor, ehrelay_version.micro
)
# The full version, including alpha/beta/rc tags.
release = ehrelay_version.public()

language = "en"

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]

pygments_style = "sphinx"

todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = "furo"

html_static_path = []

htmlhelp_basename = "ehrelaydoc"


# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, "ehrelay", "ehrelay Documentation", [author], 1)]
