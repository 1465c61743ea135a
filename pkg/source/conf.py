# Sphinx 配置
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys

# 项目根目录加入路径，autodoc 需要导入 Core / Controller / Utils
sys.path.insert(0, os.path.abspath(".."))

from Core.Repository import Constant  # noqa: E402

project = Constant.name
copyright = "2025, dgmotion developers"
author = "dgmotion developers"
release = Constant.version

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",  # Google 风格 docstring
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",  # docstring 中的公式
]

autodoc_default_options = {
    "members": True,
    "member-order": "bysource",
    "exclude-members": "__weakref__",
}
autodoc_typehints = "description"

napoleon_google_docstring = True
napoleon_numpy_docstring = False
napoleon_use_rtype = False

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}

templates_path = ["_templates"]
exclude_patterns = []

language = "zh_CN"

html_theme = "sphinx_rtd_theme"
html_static_path = ["_static"]
html_theme_options = {
    "navigation_depth": 3,
    "collapse_navigation": False,
}
