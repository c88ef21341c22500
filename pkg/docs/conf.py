# Sphinx configuration, see http://www.sphinx-doc.org/en/master/config
import os
import sys
from datetime import date

sys.path.insert(0, os.path.abspath('..'))

import nnsubspace

project = nnsubspace.__name__
copyright = '{}, nnsubspace developers'.format(date.today().year)
author = 'nnsubspace developers'
release = nnsubspace.__version__

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.viewcode',
]
templates_path = ['_templates']
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
master_doc = 'index'
html_theme = 'sphinx_rtd_theme'
autodoc_member_order = 'bysource'
