#!/usr/bin/env python3
# wvapy simulates weak-value-amplified estimation of optomechanical couplings
# Copyright (C) 2022-2026 The wvapy developers

# This program is free software; you can redistribute it and/or
# modify it under the terms of the GNU General Public License
# as published by the Free Software Foundation; in version 2
# of the License.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor,
# Boston, MA  02110-1301, USA.
"""Sphinx configuration of the wvapy documentation."""

# Core Library
import os
import sys

sys.path.insert(0, os.path.abspath("../../"))

import wvapy  # isort:skip

project = "wvapy"
copyright = "2022-2026 The wvapy developers"
author = "The wvapy developers"
version = wvapy.__version__
release = wvapy.__version__

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.doctest",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
]
autodoc_member_order = "bysource"
templates_path = ["_templates"]
exclude_patterns = []

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
master_doc = "index"

napoleon_google_docstring = False
napoleon_numpy_docstring = True
