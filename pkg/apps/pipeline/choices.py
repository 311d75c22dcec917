from __future__ import annotations

from django.db import models
from django.utils.translation import gettext_lazy as _


class FilterStage(models.TextChoices):
    SIMILARITY = "similarity", _("Embedding similarity filter")
    ROUNDTRIP = "roundtrip", _("Round-trip filter")


class ThresholdMode(models.TextChoices):
    DATA_MEAN = "data_mean", _("Mean over the scored records")
    FIXED = "fixed", _("Fixed values")


class SimilarityMode(models.TextChoices):
    FIXED = "fixed", _("Fixed threshold")
    REFERENCE = "reference", _("Mean similarity of a reference corpus")


class PipelineStage(models.TextChoices):
    PREPROCESS = "preprocess", _("Preprocess")
    REWRITE = "rewrite", _("LLM rewrite")
    TRANSLATE = "translate", _("Forward translation")
    FILTER_SIM = "filter_sim", _("Similarity filter")
    BACKTRANSLATE = "backtranslate", _("Back-translation")
    FILTER_RT = "filter_rt", _("Round-trip filter")
