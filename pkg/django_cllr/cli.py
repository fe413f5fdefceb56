"""
The ``cllr`` command-line program.

Each subcommand runs the matching ``cllr_*`` management command:

    cllr parse term.cllr
    cllr lts term.cllr --format dot
    cllr consistent term.cllr
    cllr refine left.cllr right.cllr --alphabet a,b [--formulation alt]
    cllr equiv left.cllr right.cllr
    cllr eq check|greatest|unique-pre problem.eq
    cllr actl encode formula.actl
    cllr actl check process.cllr formula.actl [--method direct|refine|both]
    cllr history

Outside a Django project the program configures Django itself. Runs are
then recorded only when CLLR_HISTORY_DB names an sqlite file.

Exit status: 0 the property holds, 1 it fails, 2 usage or analysis error
(reported on stderr as ``error:<kind>: <message>``).
"""

import os
import sys

import django
from django.conf import settings
from django.core.management import call_command, load_command_class
from django.core.management.base import CommandError

HISTORY_DB_ENV_VAR = "CLLR_HISTORY_DB"

SUBCOMMANDS = {
    "parse": "cllr_parse",
    "lts": "cllr_lts",
    "consistent": "cllr_consistent",
    "refine": "cllr_refine",
    "equiv": "cllr_equiv",
    "eq": "cllr_eq",
    "actl": "cllr_actl",
    "history": "cllr_history",
}

USAGE = (
    "usage: cllr {" + ",".join(SUBCOMMANDS) + "} ARGS [--alphabet a,b] [--bound N] [--format FORMAT]\n"
    "Run 'cllr <subcommand> --help' for the arguments of one subcommand.\n"
)


def configure():
    """Set up Django unless a settings module or configuration is already in place."""
    if settings.configured:
        return
    if os.environ.get("DJANGO_SETTINGS_MODULE"):
        django.setup()
        return
    history_db = os.environ.get(HISTORY_DB_ENV_VAR)
    settings.configure(
        INSTALLED_APPS=["django_cllr"],
        DATABASES={
            "default": {
                "ENGINE": "django.db.backends.sqlite3",
                "NAME": history_db or ":memory:",
            }
        },
        USE_TZ=True,
        DEFAULT_AUTO_FIELD="django.db.models.BigAutoField",
        CLLR={"RECORD_HISTORY": bool(history_db)},
    )
    django.setup()
    if history_db:
        call_command("migrate", "django_cllr", verbosity=0, interactive=False)


def run(argv, stdout=None, stderr=None):
    """
    Run one subcommand and return its exit status.

    Args:
        argv (list of str): Arguments without the program name.
        stdout, stderr: Streams for the report and diagnostics. Default to sys.stdout and sys.stderr.

    Returns:
        int: 0 holds or success, 1 fails, 2 error.
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if not argv:
        stderr.write(USAGE)
        return 2
    if argv[0] in ("-h", "--help"):
        stdout.write(USAGE)
        return 0
    subcommand, rest = argv[0], argv[1:]
    if subcommand not in SUBCOMMANDS:
        stderr.write(f"error:usage: unknown subcommand {subcommand!r}\n{USAGE}")
        return 2

    configure()
    command = load_command_class("django_cllr", SUBCOMMANDS[subcommand])
    try:
        call_command(command, *rest, stdout=stdout, stderr=stderr)
    except CommandError as exc:
        message = str(exc)
        if message.startswith("error:"):
            stderr.write(message + "\n")
            return exc.returncode
        stderr.write(f"error:usage: {message.replace('Error: ', '', 1)}\n")
        return 2
    except SystemExit as exc:
        # argparse exits by itself for --help
        return exc.code if isinstance(exc.code, int) else 2
    return command.exit_code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
