from pathlib import Path

from apps.cli.base import CorpusForgeCommand, existing_file
from apps.core.exceptions import ConfigError, DataError
from apps.core.jsonio import write_json
from apps.evaluation.mt import evaluate_mt, render_table
from apps.evaluation.suites import load_suite, load_system_outputs, suite_stats
from apps.metrics.registry import DEFAULT_MT_METRICS, TEXT_METRICS


def parse_system(value: str) -> tuple[str, Path]:
    name, sep, directory = value.partition("=")
    if not sep or not name or not directory:
        raise ConfigError(f"--system expects NAME=DIR, got {value!r}")
    return name, Path(directory)


class Command(CorpusForgeCommand):
    help = (
        "Score MT outputs per test subset with macro averages. Each --system "
        "NAME=DIR reads DIR/<subset>.txt, one hypothesis per line."
    )
    input_help = 'suite manifest: {"subsets": {"t1": path, ...}, "direction": [...]}'
    output_help = "also write the reports as JSON to this file"

    def add_command_arguments(self, parser):
        parser.add_argument("--system", action="append", default=[])
        parser.add_argument(
            "--metrics",
            nargs="+",
            choices=list(TEXT_METRICS),
            default=list(DEFAULT_MT_METRICS),
        )
        parser.add_argument("--format", choices=("table", "json"), default="table")

    def systems(self, options) -> list[tuple[str, Path]]:
        if not options["system"]:
            raise ConfigError("at least one --system NAME=DIR is required")
        systems = [parse_system(value) for value in options["system"]]
        names = [name for name, _ in systems]
        if len(set(names)) != len(names):
            raise ConfigError("--system names must be unique")
        for name, directory in systems:
            if not directory.is_dir():
                raise DataError(f"system {name!r}: directory not found: {directory}")
        return systems

    def plan(self, options):
        suite = load_suite(existing_file(options, "input"))
        return {
            "command": "eval-mt",
            "subsets": list(suite.subsets),
            "systems": [name for name, _ in self.systems(options)],
            "metrics": options["metrics"],
        }

    def run(self, options):
        suite = load_suite(existing_file(options, "input"))
        reports = [
            evaluate_mt(
                suite,
                load_system_outputs(suite, directory),
                system=name,
                metrics=options["metrics"],
            )
            for name, directory in self.systems(options)
        ]
        document = {
            "suite": suite_stats(suite),
            "reports": [report.to_json() for report in reports],
        }
        if options["output"]:
            write_json(options["output"], document)
        if options["format"] == "json":
            return document
        return render_table(reports)
