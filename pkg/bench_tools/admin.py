from django.contrib import admin

from .models import BenchRecord


@admin.register(BenchRecord)
class BenchRecordAdmin(admin.ModelAdmin):
    list_display = ("run_label", "file", "verdict", "steps", "conflicts", "wall_millis")
    list_filter = ("run_label", "verdict", "proof_checked")
    search_fields = ("file", "run_label")
