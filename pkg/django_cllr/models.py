"""
Models for the ledger of analysis runs.

Every analysis command records one AnalysisRun per invocation (when
RECORD_HISTORY is on) with its parameters, verdict and report.
"""
from django.db import models


class AnalysisRun(models.Model):
    """
    One invocation of an analysis command.

    ``holds`` is the verdict of the analysis (None for commands without one,
    such as ``parse`` or ``lts``, and for runs that ended in an error).
    ``exit_code`` follows the command-line contract: 0 holds, 1 fails, 2 error.
    """

    command_name = models.CharField(
        max_length=255,
        help_text="Name of the analysis command"
    )
    executed_at = models.DateTimeField(
        auto_now_add=True,
        help_text="Timestamp when the analysis was run"
    )
    success = models.BooleanField(
        default=True,
        help_text="Whether the analysis ran to completion"
    )
    parameters = models.JSONField(
        null=True,
        blank=True,
        help_text="Command parameters as JSON"
    )
    holds = models.BooleanField(
        null=True,
        blank=True,
        help_text="Verdict of the analysis, if it has one"
    )
    exit_code = models.PositiveSmallIntegerField(
        default=0,
        help_text="Process exit code: 0 holds, 1 fails, 2 error"
    )
    output = models.TextField(
        blank=True,
        default="",
        help_text="Report written to stdout"
    )
    error_message = models.TextField(
        blank=True,
        default="",
        help_text="Error message if the analysis failed"
    )
    duration = models.FloatField(
        null=True,
        blank=True,
        help_text="How long the analysis took (in seconds)"
    )

    def __str__(self):
        if not self.success:
            status = "Error"
        elif self.holds is None:
            status = "Done"
        else:
            status = "Holds" if self.holds else "Fails"
        return f"{self.command_name} - {status}"

    class Meta:
        ordering = ["-executed_at"]
        verbose_name = "Analysis Run"
        verbose_name_plural = "Analysis Runs"
