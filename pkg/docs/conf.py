"""Sphinx configuration of the mixmult documentation"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from mixmult import __version__

project = "mixmult"
author = "Bodo Graumann"
copyright = "2026, Bodo Graumann"
release = __version__
version = ".".join(__version__.split(".")[:2])

extensions = [
    "sphinx.ext.autodoc",
]
autodoc_member_order = "bysource"

master_doc = "index"
language = "en"
exclude_patterns = ["_build"]

html_theme = "alabaster"
