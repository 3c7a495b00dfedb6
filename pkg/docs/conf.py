# -*- coding: utf-8 -*-
#
# python-sasaki documentation build configuration file.

import sys
import os

sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax'
]

autoclass_content = 'both'
autodoc_member_order = 'bysource'

source_suffix = '.rst'
master_doc = 'index'

project = u'python-sasaki'
copyright = u'2026, python-sasaki contributors'

version = '1.0'
release = '1.0.0'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'nature'
htmlhelp_basename = 'python-sasakidoc'

man_pages = [
    ('index', 'python-sasaki', u'python-sasaki Documentation',
     [u'python-sasaki contributors'], 1)
]
