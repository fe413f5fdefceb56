"""
Settings access for django_cllr.

All options live in a single ``CLLR`` dict in the Django settings module:

    CLLR = {
        "STATE_BOUND": 10000,
        "ALPHABET_CAP": 4,
        "CONJUNCTION_NORMAL_FORM": True,
        "RECORD_HISTORY": True,
    }

Missing keys fall back to DEFAULTS. The ``CLLR_BOUND`` environment variable
overrides STATE_BOUND.
"""

import os

from django.conf import settings

from .exceptions import InputFormatError

DEFAULTS = {
    "STATE_BOUND": 10000,
    "ALPHABET_CAP": 4,
    "CONJUNCTION_NORMAL_FORM": True,
    "RECORD_HISTORY": True,
}

BOUND_ENV_VAR = "CLLR_BOUND"


def get_setting(name):
    """
    Return the configured value of a CLLR option.

    Works without configured Django settings, in which case the defaults apply.

    Args:
        name (str): One of the keys of DEFAULTS.

    Returns:
        The value from ``settings.CLLR`` if present, otherwise the default.
    """
    if name not in DEFAULTS:
        raise KeyError(f"Unknown CLLR setting: {name}")
    user_settings = getattr(settings, "CLLR", {}) if settings.configured else {}
    return user_settings.get(name, DEFAULTS[name])


def state_bound(explicit=None):
    """
    Resolve the exploration bound: explicit value, then CLLR_BOUND, then settings.
    """
    if explicit is not None:
        bound = explicit
    elif os.environ.get(BOUND_ENV_VAR):
        try:
            bound = int(os.environ[BOUND_ENV_VAR])
        except ValueError:
            raise InputFormatError(f"{BOUND_ENV_VAR} must be an integer, got {os.environ[BOUND_ENV_VAR]!r}")
    else:
        bound = get_setting("STATE_BOUND")
    if bound < 1:
        raise InputFormatError(f"State bound must be positive, got {bound}")
    return bound
