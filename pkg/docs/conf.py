# Sphinx configuration for the warplab docs.
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

project = "warplab"
copyright = "2026, the warplab developers"
author = "the warplab developers"
release = "v0.1.0"

master_doc = "index"

extensions = ["sphinx.ext.intersphinx", "sphinx.ext.mathjax"]
intersphinx_mapping = {
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}

templates_path = ["_templates"]
exclude_patterns = ["_build"]

html_theme = "alabaster"
html_static_path = ["_static"]
html_theme_options = {
    "fixed_sidebar": True,
    "code_font_size": "12px",
}
