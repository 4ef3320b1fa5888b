# -*- coding: utf-8 -*-
#
# splinelab documentation build configuration file.

import sys
import os

import sphinx_rtd_theme

sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'splinelab'
copyright = u'2017, splinelab developers'
author = u'splinelab developers'

# The short X.Y version and the full release string.
__version__ = 'placeholder'
exec(open(os.path.join(os.path.abspath('..'), 'splinelab/version.py')).read())
version = __version__
release = __version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
htmlhelp_basename = 'splinelabdoc'

man_pages = [
    (master_doc, 'splinelab', u'splinelab Documentation', [author], 1)
]
