from apps.cli.base import PipelineStageCommand
from apps.pipeline.choices import PipelineStage


class Command(PipelineStageCommand):
    help = "Translate similarity survivors back and score them against the originals"
    stage = PipelineStage.BACKTRANSLATE
