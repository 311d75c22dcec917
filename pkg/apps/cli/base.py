from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

from django.core.management.base import BaseCommand, CommandError

from apps.core.exceptions import ConfigError, CorpusForgeError
from apps.pipeline.config import RunConfig, load_run_config
from apps.pipeline.runner import SynthesisPipeline

FLAGS = {"input": "--in", "output": "--out"}

VERBOSITY_LEVELS = {0: logging.ERROR, 2: logging.INFO, 3: logging.DEBUG}


def flag_name(key: str) -> str:
    return FLAGS.get(key, "--" + key.replace("_", "-"))


def configure_verbosity(verbosity: int) -> None:
    """``-v 0`` silences progress; 1 keeps the configured level."""
    level = VERBOSITY_LEVELS.get(verbosity)
    if level is not None:
        logging.getLogger("apps").setLevel(level)


class CorpusForgeCommand(BaseCommand):
    """
    Shared flags and error handling of every subcommand.

    Subclasses implement ``run`` and may override ``plan``, which answers
    ``--dry-run`` and must not contact any backend. Both return a JSON-able
    value or a string; it is the only thing written to stdout.
    """

    requires_system_checks = []
    config_help = "pipeline.json holding endpoints and run options"
    input_help = "input file"
    output_help = "output file or directory"

    def add_arguments(self, parser):
        parser.add_argument("--config", help=self.config_help)
        parser.add_argument("--in", dest="input", help=self.input_help)
        parser.add_argument("--out", dest="output", help=self.output_help)
        parser.add_argument(
            "--dry-run",
            action="store_true",
            help="validate inputs and print the plan without calling any backend",
        )
        parser.add_argument("--seed", type=int, help="seed for exemplar sampling")
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def handle(self, *args, **options):
        configure_verbosity(options["verbosity"])
        try:
            result = self.plan(options) if options["dry_run"] else self.run(options)
        except CorpusForgeError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code) from exc
        self.emit(result)

    def emit(self, result: Any) -> None:
        if result is None:
            return
        if not isinstance(result, str):
            result = json.dumps(result, ensure_ascii=False, indent=2)
        self.stdout.write(result)

    def run(self, options: dict[str, Any]) -> Any:
        raise NotImplementedError

    def plan(self, options: dict[str, Any]) -> Any:
        raise ConfigError("--dry-run is not supported by this command")

    @staticmethod
    def require(options: dict[str, Any], key: str) -> Any:
        value = options.get(key)
        if value is None:
            raise ConfigError(f"{flag_name(key)} is required")
        return value

    def run_config(self, options: dict[str, Any]) -> RunConfig:
        return load_run_config(
            self.require(options, "config"),
            seed=options["seed"],
            output_dir=options["output"],
            input=options["input"],
        )


def existing_file(options: dict[str, Any], key: str) -> Path:
    path = Path(CorpusForgeCommand.require(options, key))
    if not path.is_file():
        raise ConfigError(f"{flag_name(key)}: file not found: {path}")
    return path


class PipelineStageCommand(CorpusForgeCommand):
    """
    One pipeline stage over the checkpoints of a ``pipeline.json`` run.

    Earlier stages are read back from their checkpoints (and run first when
    missing), so running the stages one by one writes the same files as a
    single ``pipeline`` run.
    """

    stage: str = ""
    input_help = "input dataset, overriding the config's input"
    output_help = "output directory, overriding the config's output_dir"

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--no-resume",
            action="store_true",
            help="ignore existing checkpoints and recompute",
        )

    def pipeline(self, options: dict[str, Any]) -> SynthesisPipeline:
        return SynthesisPipeline(
            self.run_config(options), resume=not options.get("no_resume")
        )

    def plan(self, options: dict[str, Any]) -> Any:
        steps = self.pipeline(options).plan()
        names = [step["stage"] for step in steps]
        return steps[: names.index(self.stage) + 1]

    def run(self, options: dict[str, Any]) -> Any:
        return self.pipeline(options).run_until(self.stage)
