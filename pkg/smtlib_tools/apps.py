from django.apps import AppConfig


class SmtlibToolsConfig(AppConfig):
    """
    Configuration class for the smtlib_tools app.
    """

    default_auto_field = "django.db.models.BigAutoField"
    name = "smtlib_tools"
