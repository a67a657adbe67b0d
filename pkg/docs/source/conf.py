#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# mgopt documentation build configuration file.

import os
import sys

import sphinx_bootstrap_theme

sys.path.insert(0, os.path.abspath('../../src'))

from mgopt import __version__

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.autosummary',
              'sphinx.ext.doctest',
              'sphinx.ext.intersphinx',
              'sphinx.ext.todo',
              'sphinx.ext.mathjax',
              'sphinx.ext.viewcode',
              'sphinx_autodoc_typehints']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'mgopt'
copyright = '2026, the mgopt developers'
author = 'the mgopt developers'

version = __version__
release = __version__

language = 'en'
exclude_patterns = []
pygments_style = 'sphinx'
todo_include_todos = True

# -- Options for HTML output ----------------------------------------------

html_theme = 'bootstrap'
html_theme_path = sphinx_bootstrap_theme.get_html_theme_path()
html_theme_options = {'bootswatch_theme': "paper", }
html_static_path = []
htmlhelp_basename = 'mgopt doc'

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'mgopt', 'mgopt Documentation',
     [author], 1)
]

intersphinx_mapping = {'python': ('https://docs.python.org/3', None),
                       'numpy': ('https://numpy.org/doc/stable', None),
                       'scipy': ('https://docs.scipy.org/doc/scipy', None)}
