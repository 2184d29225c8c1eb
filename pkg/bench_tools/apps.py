from django.apps import AppConfig


class BenchToolsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "bench_tools"
