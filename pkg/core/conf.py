"""Access to solver settings with app-level defaults."""

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

from . import settings as defaults


def solver_setting(name: str):
    """Value of ``settings.CDSAT[name]``, falling back to ``core.settings``."""
    try:
        configured = getattr(settings, "CDSAT", {})
    except ImproperlyConfigured:
        configured = {}
    if name in configured:
        return configured[name]
    return getattr(defaults, name)
