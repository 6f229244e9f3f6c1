# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later

# Configuration file for the Sphinx documentation builder.
#
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))


# -- Project information -----------------------------------------------------

project = 'crossings-lab'
copyright = '2026 The crossings-lab developers. CC-BY-SA-4.0'
author = 'The crossings-lab developers'

release = 'dev'


# -- General configuration ---------------------------------------------------

extensions = [
	'sphinx.ext.autodoc',
	'sphinx.ext.viewcode',
	'sphinx.ext.autosummary',
	'sphinx.ext.intersphinx',
	'sphinx.ext.mathjax',
]

intersphinx_mapping = {
	'python': ('https://docs.python.org/3', None),
	'numpy': ('https://numpy.org/doc/stable', None),
	'scipy': ('https://docs.scipy.org/doc/scipy', None),
}

templates_path = ['_templates']

exclude_patterns = []


# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'
html_theme_options = {
	'page_width': '98%',
	'body_max_width': '1620px',
	'sidebar_collapse': False,
	'sidebar_width': '260px',
}

html_sidebars = {
	'**': [
		'about.html',
		'navigation.html',
		'relations.html',
		'searchbox.html',
	]
}
