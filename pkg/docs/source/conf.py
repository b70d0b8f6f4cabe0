# Sphinx configuration for pythonic-fp-proxkit

import os
from typing import Any
from sphinx.application import Sphinx

project = 'Pythonic FP - Proximal Kit'
author = 'Geoffrey R. Scheller'
copyright = f'2026, {author}'
release = os.environ.get('PROXKIT_DOCS_RELEASE', '0.1.0')

match os.environ.get('PROXKIT_DOCS_BUILD', 'devel'):
    case 'release':
        release_string = f'**PyPI release version {release}**'
    case _:
        release_string = f'**Proposed PyPI release version {release}**'


def skip_dunder_noise(
    app: Any, what: str, name: str, obj: Any, skip: bool, options: Any
) -> bool:
    if name in ('__init_subclass__', '__subclasshook__', '__weakref__', '__slots__'):
        return True
    return skip


def setup(app: Sphinx) -> None:
    app.connect('autodoc-skip-member', skip_dunder_noise)


extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
]

autodoc_default_options = {
    'members': True,
    'special-members': '__call__, __getitem__',
    'inherited-members': False,
    'show-inheritance': True,
}
autodoc_member_order = 'bysource'
autoclass_content = 'class'
autodoc_class_signature = 'separated'
autodoc_typehints_format = 'short'
autodoc_preserve_defaults = True

templates_path = ['_templates']
exclude_patterns: list[str] = []

html_theme = 'furo'
html_static_path = ['_static']

rst_epilog = f"""
.. |RELEASE_STRING| replace:: {release_string}

"""
