from django_cllr.base import AnalysisCommand, AnalysisResult, render
from django_cllr.utils import get_run_history


class Command(AnalysisCommand):
    help = "List recent analysis runs, newest first"

    formats = ("text", "json")
    record_history = False

    def add_analysis_arguments(self, parser):
        parser.add_argument("--command", dest="command_filter", help="Only runs of this command, e.g. django_cllr.cllr_refine")
        parser.add_argument("--limit", type=int, default=10, help="Number of runs to list (default: 10)")

    def execute_analysis(self, config, **options):
        runs = list(get_run_history(options.get("command_filter"), options.get("limit") or 10))
        if config.format == "json":
            data = [
                {
                    "command": run.command_name,
                    "executedAt": run.executed_at.isoformat(),
                    "success": run.success,
                    "holds": run.holds,
                    "exitCode": run.exit_code,
                    "duration": run.duration,
                    "error": run.error_message,
                }
                for run in runs
            ]
            return AnalysisResult(render(data, "json"))
        if not runs:
            return AnalysisResult("No analysis runs recorded.")
        lines = []
        for run in runs:
            duration = f"{run.duration:.2f}s" if run.duration is not None else "-"
            lines.append(f"{run.executed_at:%Y-%m-%d %H:%M:%S}  {run}  exit {run.exit_code}  {duration}")
        return AnalysisResult("\n".join(lines))
