"""Sphinx configuration for the qtomo API reference."""
import os
import sys

sys.path.insert(0, os.path.abspath('..'))

from qtomo.lib.version import ClientVersion

project = 'qtomo'
author = 'qtomo developers'
copyright = '2026, qtomo developers'

release = ClientVersion.version()
version = release.split('.')[0]

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.githubpages',
    'sphinxcontrib.restbuilder',
    'sphinx_jekyll_builder',
    'sphinx_autodoc_typehints',
]

# Docstrings use reST field lists (:param x:) and plain-text formulas
autodoc_member_order = 'bysource'
autodoc_default_options = {'undoc-members': False}
napoleon_google_docstring = False

exclude_patterns = ['_build', 'build/*', 'tests/*', 'scripts/*', '.pytest_cache/*', 'dist/*']

html_theme = 'furo'
html_title = f'qtomo {release}'
