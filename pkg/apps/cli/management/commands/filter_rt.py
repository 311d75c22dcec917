import logging
from pathlib import Path

from apps.cli.base import PipelineStageCommand, existing_file
from apps.core.jsonio import write_json
from apps.pipeline.checkpoints import (
    STAGE_FILES,
    load_roundtrip_records,
    save_decisions,
)
from apps.pipeline.choices import PipelineStage, ThresholdMode
from apps.pipeline.roundtrip import filter_roundtrip

logger = logging.getLogger(__name__)

THRESHOLDS_FILE = "thresholds.json"


class Command(PipelineStageCommand):
    help = (
        "Round-trip filter: keep records whose BLEU and METEOR reach the "
        "thresholds. With --config this is the last pipeline stage; otherwise "
        "--in names a round-trip records file and --out a directory."
    )
    stage = PipelineStage.FILTER_RT

    def add_command_arguments(self, parser):
        super().add_command_arguments(parser)
        parser.add_argument(
            "--mode", choices=ThresholdMode.values, default=ThresholdMode.DATA_MEAN
        )
        parser.add_argument("--mu-bleu", type=float)
        parser.add_argument("--mu-meteor", type=float)

    def plan(self, options):
        if options["config"]:
            return super().plan(options)
        source = existing_file(options, "input")
        output = Path(self.require(options, "output"))
        return [{"stage": self.stage, "input": str(source), "output": str(output)}]

    def run(self, options):
        if options["config"]:
            return super().run(options)
        source = existing_file(options, "input")
        output = Path(self.require(options, "output"))
        records = load_roundtrip_records(source)
        retained, decisions, thresholds = filter_roundtrip(
            records,
            options["mode"],
            mu_bleu=options["mu_bleu"],
            mu_meteor=options["mu_meteor"],
        )
        output.mkdir(parents=True, exist_ok=True)
        save_decisions(output / STAGE_FILES[self.stage], decisions)
        write_json(output / THRESHOLDS_FILE, thresholds.to_json())
        logger.info("Round-trip filter kept %d of %d", len(retained), len(records))
        return {
            "input": len(records),
            "entries": len(retained),
            "thresholds": thresholds.to_json(),
        }
