import importlib.metadata

project = "hh-midpoint"
copyright = "2026, hh-midpoint contributors"
author = "hh-midpoint contributors"
version = importlib.metadata.version("hh_midpoint")
release = importlib.metadata.version("hh_midpoint")

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
    "sphinx.ext.napoleon",
    "sphinx_click",
]

templates_path = ["_templates"]
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
html_theme = "pydata_sphinx_theme"
html_static_path = ["_static"]

intersphinx_mapping = {"numpy": ("https://numpy.org/doc/stable", None)}
