from pathlib import Path

from django.conf import settings

from apps.cli.base import PipelineStageCommand, existing_file
from apps.corpus.choices import DatasetKind
from apps.corpus.io import load_dataset, save_dataset
from apps.pipeline.choices import PipelineStage
from apps.pipeline.config import PreprocessOptions
from apps.pipeline.runner import preprocess_dataset


class Command(PipelineStageCommand):
    help = (
        "Length-filter SA reviews or restrict MCQA choice counts. With --config "
        "this is the pipeline stage; otherwise --in/--kind/--out name the files."
    )
    stage = PipelineStage.PREPROCESS
    output_help = "output directory (with --config) or output JSONL file"

    def add_command_arguments(self, parser):
        super().add_command_arguments(parser)
        parser.add_argument("--kind", choices=[DatasetKind.SA, DatasetKind.MCQA])
        parser.add_argument(
            "--length-cutoff", type=int, help="reuse a word-count cutoff (sa)"
        )
        parser.add_argument(
            "--no-length-filter", action="store_true", help="keep every review (sa)"
        )

    def standalone(self, options):
        source = existing_file(options, "input")
        kind = self.require(options, "kind")
        output = Path(self.require(options, "output"))
        config = settings.CORPUSFORGE
        preprocess = PreprocessOptions(
            length_filter=not options["no_length_filter"],
            length_cutoff=options["length_cutoff"],
            excluded_choice_counts=tuple(config["EXCLUDED_CHOICE_COUNTS"]),
            choice_range=tuple(config["CHOICE_RANGE"]),
        )
        return source, kind, output, preprocess

    def plan(self, options):
        if options["config"]:
            return super().plan(options)
        source, kind, output, _ = self.standalone(options)
        return [{"stage": self.stage, "input": str(source), "output": str(output)}]

    def run(self, options):
        if options["config"]:
            return super().run(options)
        source, kind, output, preprocess = self.standalone(options)
        dataset = load_dataset(source, kind)
        kept, meta = preprocess_dataset(dataset, preprocess)
        save_dataset(kept, output)
        return {"input": len(dataset), "entries": len(kept), **meta}
