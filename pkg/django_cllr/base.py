"""
Base class for the CLL_R analysis commands.

This module provides the AnalysisCommand base class that handles:
- The shared --alphabet, --bound and --format options
- Timing of each analysis
- The exit-code contract (0 holds, 1 fails, 2 error)
- Recording every run, successful or not, in the AnalysisRun ledger
"""

import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Tuple

from django.core.management.base import BaseCommand, CommandError

from .conf import get_setting, state_bound
from .exceptions import CllrError
from .loaders import parse_alphabet
from .utils import record_analysis_run


@dataclass(frozen=True)
class RunConfig:
    """Options shared by every analysis command."""

    alphabet: Optional[Tuple[str, ...]]
    bound: int
    format: str
    method: Optional[str] = None


@dataclass(frozen=True)
class AnalysisResult:
    """What an analysis writes to stdout and, if it decides a property, its verdict."""

    output: str
    holds: Optional[bool] = None


def render(data, output_format):
    if output_format == "json":
        return json.dumps(data, indent=2, ensure_ascii=False)
    raise ValueError(f"No generic renderer for format {output_format!r}")


class AnalysisCommand(BaseCommand):
    """
    Base class for analysis management commands.

    Subclasses implement ``execute_analysis`` and return an AnalysisResult.
    Toolkit errors become a CommandError carrying ``error:<kind>: <message>``
    and return code 2.

    Example:
        class Command(AnalysisCommand):
            help = "Check that a process is consistent"

            def add_analysis_arguments(self, parser):
                parser.add_argument("process")

            def execute_analysis(self, config, **options):
                lts = build_lts(load_term(options["process"], config.alphabet).term, config.bound)
                consistent = not lts.inconsistent(lts.initial)
                return AnalysisResult(render({"consistent": consistent}, config.format), consistent)
    """

    requires_system_checks = []

    # Output formats this command can produce; the first one is the default.
    formats = ("json", "text")

    # Override to customize command name, otherwise auto-derived from module path
    # e.g., "django_cllr.management.commands.cllr_lts" -> "django_cllr.cllr_lts"
    command_name = None

    # Whether runs of this command are written to the ledger at all
    record_history = True

    exit_code = 0

    # Options to exclude from serialization (non-JSON-serializable or internal)
    _non_serializable_options = (
        "stdout",
        "stderr",
        "no_color",
        "force_color",
        "skip_checks",
        "settings",
        "pythonpath",
        "traceback",
    )

    def add_arguments(self, parser):
        parser.add_argument(
            "--alphabet",
            help="Comma-separated visible actions, e.g. a,b (default: declared in the input or inferred)",
        )
        parser.add_argument(
            "--bound",
            type=int,
            help="Maximal number of states explored per graph (default: CLLR_BOUND or STATE_BOUND)",
        )
        parser.add_argument(
            "--format",
            choices=self.formats,
            default=self.formats[0],
            help="Report format",
        )
        self.add_analysis_arguments(parser)

    def add_analysis_arguments(self, parser):
        """Override to add the command's own arguments."""

    def get_command_name(self):
        """
        Returns the command name for the ledger.

        If `command_name` class attribute is set, uses that value.
        Otherwise, auto-derives from module path:
            myapp.management.commands.my_command -> myapp.my_command
        """
        if self.command_name:
            return self.command_name

        module = self.__class__.__module__
        parts = module.split(".")
        if len(parts) >= 4 and parts[-3:-1] == ["management", "commands"]:
            return f"{parts[-4]}.{parts[-1]}"
        return module

    def get_serializable_options(self, options):
        """Filter out non-serializable options for storage."""
        return {k: v for k, v in options.items() if k not in self._non_serializable_options}

    def get_config(self, options):
        alphabet = parse_alphabet(options["alphabet"]) if options.get("alphabet") else None
        return RunConfig(
            alphabet=alphabet,
            bound=state_bound(options.get("bound")),
            format=options.get("format") or self.formats[0],
            method=options.get("method"),
        )

    def record(self, **fields):
        if self.record_history and get_setting("RECORD_HISTORY"):
            record_analysis_run(command_name=self.get_command_name(), **fields)

    def handle(self, *args, **options):
        """
        Wraps execute_analysis with timing, exit-code mapping and recording.

        This method:
        1. Resolves the shared options into a RunConfig
        2. Runs execute_analysis and writes its report to stdout
        3. Sets exit_code from the verdict
        4. Records the run (success or failure) when RECORD_HISTORY is on
        5. Re-raises toolkit errors as CommandError(returncode=2), anything else as is
        """
        cmd_name = self.get_command_name()
        start_time = time.time()
        parameters = self.get_serializable_options(options)
        self.exit_code = 0

        try:
            config = self.get_config(options)
            result = self.execute_analysis(config, *args, **options)
        except CllrError as e:
            duration = time.time() - start_time
            error_message = f"error:{e.kind}: {e}"
            self.exit_code = 2
            self.record(
                success=False,
                parameters=parameters,
                exit_code=2,
                error_message=error_message,
                duration=duration,
            )
            raise CommandError(error_message, returncode=2) from e
        except Exception as e:
            self.exit_code = 2
            self.record(
                success=False,
                parameters=parameters,
                exit_code=2,
                error_message=str(e),
                duration=time.time() - start_time,
            )
            raise

        duration = time.time() - start_time
        self.exit_code = 1 if result.holds is False else 0
        self.stdout.write(result.output)
        self.record(
            success=True,
            parameters=parameters,
            holds=result.holds,
            exit_code=self.exit_code,
            output=result.output,
            duration=duration,
        )

        if options.get("verbosity", 1) >= 2:
            if result.holds is None:
                status = self.style.SUCCESS(f"{cmd_name} completed in {duration:.2f}s")
            elif result.holds:
                status = self.style.SUCCESS(f"{cmd_name}: holds ({duration:.2f}s)")
            else:
                status = self.style.WARNING(f"{cmd_name}: fails ({duration:.2f}s)")
            self.stderr.write(status)

    def run_from_argv(self, argv):
        super().run_from_argv(argv)
        if self.exit_code:
            sys.exit(self.exit_code)

    def execute_analysis(self, config, *args, **options):
        """
        Override this method with the analysis.

        Args:
            config (RunConfig): The resolved shared options.
            *args: Positional arguments passed to the command
            **options: Options parsed from command line arguments

        Returns:
            AnalysisResult: The report and the verdict (None when the command
            decides no property).

        Raises:
            CllrError: Reported as ``error:<kind>:`` with exit status 2.
        """
        raise NotImplementedError("Subclasses must implement execute_analysis()")
