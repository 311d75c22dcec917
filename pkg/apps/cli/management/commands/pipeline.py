from apps.cli.base import PipelineStageCommand
from apps.pipeline.choices import PipelineStage


class Command(PipelineStageCommand):
    help = "Run every stage of the synthesis pipeline, resuming from checkpoints"
    stage = PipelineStage.FILTER_RT

    def run(self, options):
        pipeline = self.pipeline(options)
        _, report = pipeline.run()
        return {
            "output_dir": str(pipeline.config.output_dir),
            "stage_counts": report.stage_counts,
            "thresholds": report.thresholds,
        }
