from __future__ import annotations

from django.db import models
from django.utils.translation import gettext_lazy as _


class DatasetKind(models.TextChoices):
    SA = "sa", _("Sentiment analysis")
    MCQA = "mcqa", _("Multiple-choice question answering")
    PARALLEL = "parallel", _("Parallel corpus")


class SentimentLabel(models.IntegerChoices):
    POSITIVE = 0, _("Positive")
    NEGATIVE = 1, _("Negative")
