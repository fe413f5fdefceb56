"""
Django CLLR

A Django library for the LLTS-oriented process calculus CLL_R: parsing,
operational semantics with an inconsistency predicate, ready-simulation
refinement checking, recursive-equation analysis and the ACTL encoding,
exposed as management commands with a recorded run history.
"""

__version__ = "0.1.0"

default_app_config = "django_cllr.apps.DjangoCllrConfig"
