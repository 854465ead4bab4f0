#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# radpressure documentation build configuration file.
# Build with: sphinx-build -b html doc/source doc/build

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join("..", "..", "src")))

# -- General configuration ------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
]

# Docstrings use the Google style: Args, Keyword arguments, Returns
napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_include_init_with_doc = True
napoleon_use_param = False
napoleon_use_rtype = False
napoleon_use_keyword = True

autodoc_member_order = "bysource"

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "modules"

project = "radpressure"
copyright = "2026, radpressure developers"
author = "radpressure developers"

version = "2026.10"
release = "2026.10.1"

language = "en"
exclude_patterns = []
pygments_style = "sphinx"

# -- Options for HTML output ----------------------------------------------

html_theme = "alabaster"
html_static_path = ["_static"]
htmlhelp_basename = "radpressuredoc"

