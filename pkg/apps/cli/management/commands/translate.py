from apps.cli.base import PipelineStageCommand
from apps.pipeline.choices import PipelineStage


class Command(PipelineStageCommand):
    help = "Translate the preprocessed entries into the target language"
    stage = PipelineStage.TRANSLATE
