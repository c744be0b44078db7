# Configuration file for the Sphinx documentation builder of nlslab
import os
import sys
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
from nlslab import __about__  # noqa: E402


# -- Project information -----------------------------------------------------
project = __about__.__title__
copyright = __about__.__copyright__
author = __about__.__author__
version = __about__.__version__
release = version


# -- General configuration ---------------------------------------------------
extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinxcontrib.contentui',
]
templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store', 'source/api/README.md']

autodoc_member_order = 'bysource'
autodoc_typehints = 'description'


# -- Output ------------------------------------------------------------------
html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
htmlhelp_basename = 'nlslabdoc'

latex_documents = [
    (master_doc, 'nlslab.tex', 'nlslab Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'nlslab', 'nlslab Documentation', [author], 1),
]
texinfo_documents = [
    (master_doc, 'nlslab', 'nlslab Documentation', author, 'nlslab',
     __about__.__summary__, 'Science'),
]


# -- Extensions --------------------------------------------------------------
intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable', None),
    'scipy': ('https://docs.scipy.org/doc/scipy', None),
}
