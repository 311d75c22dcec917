from apps.cli.base import PipelineStageCommand
from apps.pipeline.choices import PipelineStage


class Command(PipelineStageCommand):
    help = "Similarity filter: keep translations whose cosine reaches the threshold"
    stage = PipelineStage.FILTER_SIM
