"""
Django admin configuration for django_cllr.

Analysis runs are shown read-only: the ledger is written by the commands only.
"""
from django.contrib import admin

from .models import AnalysisRun


@admin.register(AnalysisRun)
class AnalysisRunAdmin(admin.ModelAdmin):
    list_display = ['command_name', 'executed_at', 'success', 'holds', 'exit_code', 'duration']
    list_filter = ['success', 'holds', 'command_name', 'executed_at']
    search_fields = ['command_name', 'output', 'error_message']
    readonly_fields = [
        'command_name',
        'executed_at',
        'success',
        'parameters',
        'holds',
        'exit_code',
        'output',
        'error_message',
        'duration',
    ]
    ordering = ['-executed_at']
    date_hierarchy = 'executed_at'

    def has_add_permission(self, request):
        return False
