"""``corpusforge <subcommand> [options]``: every command of the toolkit."""

from __future__ import annotations

import os
import sys
from importlib import import_module
from typing import Sequence, TextIO

from django.core.management.base import CommandError

from apps.core.exceptions import EXIT_OK, EXIT_VALIDATION

PROG = "corpusforge"

# subcommand → management command module
SUBCOMMANDS = {
    "preprocess": "preprocess",
    "translate": "translate",
    "filter-sim": "filter_sim",
    "backtranslate": "backtranslate",
    "filter-rt": "filter_rt",
    "pipeline": "pipeline",
    "eval-mt": "eval_mt",
    "eval-task": "eval_task",
    "stats": "stats",
    "compare-gold": "compare_gold",
    "fertility": "fertility",
    "combine": "combine",
    "fsl-predict": "fsl_predict",
}


def load_command(subcommand: str, stdout: TextIO, stderr: TextIO):
    module = import_module(f"apps.cli.management.commands.{SUBCOMMANDS[subcommand]}")
    return module.Command(stdout=stdout, stderr=stderr)


def usage(stdout: TextIO, stderr: TextIO) -> str:
    lines = [f"usage: {PROG} <subcommand> [options]", "", "subcommands:"]
    width = max(map(len, SUBCOMMANDS))
    for subcommand in SUBCOMMANDS:
        command = load_command(subcommand, stdout, stderr)
        lines.append(f"  {subcommand.ljust(width)}  {command.help.splitlines()[0]}")
    return "\n".join(lines) + "\n"


def run_cli(
    argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None
) -> int:
    """Run one subcommand and return its exit code; errors go to *stderr*."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(argv)

    if not argv or argv[0] in ("-h", "--help", "help"):
        (stdout if argv else stderr).write(usage(stdout, stderr))
        return EXIT_OK if argv else EXIT_VALIDATION
    subcommand, args = argv[0], argv[1:]
    if subcommand not in SUBCOMMANDS:
        stderr.write(f"{PROG}: unknown subcommand {subcommand!r}\n\n")
        stderr.write(usage(stdout, stderr))
        return EXIT_VALIDATION

    command = load_command(subcommand, stdout, stderr)
    parser = command.create_parser(PROG, subcommand)
    try:
        options = vars(parser.parse_args(args))
    except CommandError as exc:
        stderr.write(parser.format_usage())
        stderr.write(f"{PROG} {subcommand}: {exc}\n")
        return EXIT_VALIDATION
    except SystemExit as exc:
        # --help
        return exc.code or EXIT_OK

    positional = options.pop("args", ())
    try:
        command.execute(*positional, **options)
    except CommandError as exc:
        stderr.write(f"{PROG} {subcommand}: {exc}\n")
        return exc.returncode
    return EXIT_OK


def main() -> None:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "corpusforge.settings.local")
    import django

    django.setup()
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
