from django.conf import settings

from apps.cli.base import CorpusForgeCommand, existing_file
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset
from apps.corpus.stats import compute_corpus_stats, compute_paired_stats


class Command(CorpusForgeCommand):
    help = "Descriptive statistics of a dataset, or of a source/translation pair"
    input_help = "dataset JSONL"

    def add_command_arguments(self, parser):
        parser.add_argument("--kind", choices=DatasetKind.values, required=True)
        parser.add_argument(
            "--paired", metavar="TARGET", help="translated dataset with the same ids"
        )
        parser.add_argument("--src-lang", default=settings.CORPUSFORGE["SRC_LANG"])
        parser.add_argument("--tgt-lang", default=settings.CORPUSFORGE["TGT_LANG"])

    def plan(self, options):
        inputs = [str(existing_file(options, "input"))]
        if options["paired"]:
            inputs.append(str(existing_file(options, "paired")))
        return {"command": "stats", "kind": options["kind"], "inputs": inputs}

    def run(self, options):
        dataset = load_dataset(existing_file(options, "input"), options["kind"])
        if not options["paired"]:
            return compute_corpus_stats(dataset).to_report()
        target = load_dataset(existing_file(options, "paired"), options["kind"])
        paired = compute_paired_stats(
            dataset, target, options["src_lang"], options["tgt_lang"]
        )
        return {lang: stats.to_report() for lang, stats in paired.items()}
