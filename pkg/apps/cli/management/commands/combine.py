from pathlib import Path

from apps.cli.base import CorpusForgeCommand, existing_file
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset, save_dataset
from apps.corpus.preprocessing import combine_corpora


class Command(CorpusForgeCommand):
    help = "Concatenate an authentic and a synthetic parallel corpus for MT training"
    input_help = "authentic parallel corpus"
    output_help = "combined parallel corpus"

    def add_command_arguments(self, parser):
        parser.add_argument("--synthetic", help="synthetic parallel corpus")

    def plan(self, options):
        return {
            "command": "combine",
            "inputs": [
                str(existing_file(options, "input")),
                str(existing_file(options, "synthetic")),
            ],
            "output": str(self.require(options, "output")),
        }

    def run(self, options):
        corpora = {
            "authentic": load_dataset(
                existing_file(options, "input"), DatasetKind.PARALLEL
            ),
            "synthetic": load_dataset(
                existing_file(options, "synthetic"), DatasetKind.PARALLEL
            ),
        }
        output = Path(self.require(options, "output"))
        combined = combine_corpora(corpora)
        save_dataset(combined, output)
        return {
            "entries": len(combined),
            "sources": {name: len(corpus) for name, corpus in corpora.items()},
            "output": str(output),
        }
