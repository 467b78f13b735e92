# Sphinx configuration for the MidFea documentation.
#
# Build with ``pip install -e .[docs]`` then ``sphinx-build docs docs/_build``.

import os
import sys
sys.path.insert(0, os.path.abspath('..'))

# -- Project information -----------------------------------------------------

project = 'MidFea'
copyright = '2021, MidFea developers'
author = 'MidFea developers'

from midfea import __version__ as release

# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx_rtd_theme',
]
autodoc_member_order = 'bysource'

exclude_patterns = ['_build']

# -- Options for HTML output -------------------------------------------------

html_theme = 'sphinx_rtd_theme'

# -- End of File -------------------------------------------------------------
