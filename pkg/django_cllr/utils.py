"""Utility functions for the analysis run ledger."""

from .models import AnalysisRun


def record_analysis_run(
    command_name,
    success=True,
    parameters=None,
    holds=None,
    exit_code=0,
    output="",
    error_message="",
    duration=None,
):
    """
    Record an analysis run in the database.

    Args:
        command_name (str): The analysis command, e.g. ``"django_cllr.cllr_refine"``.
        success (bool, optional): Whether the analysis ran to completion. Defaults to True.
        parameters (dict, optional): JSON-serializable command options. Defaults to None.
        holds (bool, optional): Verdict of the analysis, None when it has none.
        exit_code (int, optional): 0 holds, 1 fails, 2 error. Defaults to 0.
        output (str, optional): The report written to stdout. Defaults to "".
        error_message (str, optional): The ``error:<kind>:`` line of a failed run. Defaults to "".
        duration (float, optional): Wall-clock seconds. Defaults to None.

    Returns:
        AnalysisRun: The saved record.

    Example:
        >>> run = record_analysis_run("django_cllr.cllr_refine", holds=True, duration=0.3)
        >>> str(run)
        'django_cllr.cllr_refine - Holds'
    """
    return AnalysisRun.objects.create(
        command_name=command_name,
        success=success,
        parameters=parameters,
        holds=holds,
        exit_code=exit_code,
        output=output,
        error_message=error_message,
        duration=duration,
    )


def get_run_history(command_name=None, limit=10):
    """
    Most recent analysis runs, newest first.

    Args:
        command_name (str, optional): Only runs of this command. Defaults to all commands.
        limit (int, optional): Maximum number of records. Defaults to 10.

    Returns:
        QuerySet: AnalysisRun instances ordered by -executed_at.
    """
    runs = AnalysisRun.objects.all()
    if command_name:
        runs = runs.filter(command_name=command_name)
    return runs.order_by("-executed_at")[:limit]
