from django.contrib import admin

from .models import SolveHistory


@admin.register(SolveHistory)
class SolveHistoryAdmin(admin.ModelAdmin):
    """
    Admin class for SolveHistory model.
    """

    list_display = ("name", "verdict", "proof_mode", "steps", "proof_checked", "executed_at")
    list_filter = ("verdict", "proof_mode", "proof_checked", "executed_at")
    search_fields = ("name", "script")
    ordering = ("-executed_at",)
