from __future__ import annotations

from django.db import models
from django.utils.translation import gettext_lazy as _


class EndpointKind(models.TextChoices):
    TRANSLATE = "translate", _("Translation service")
    EMBED = "embed", _("Sentence embedding service")
    CHAT = "chat", _("Chat LLM")
    TOKENIZE = "tokenize", _("Tokenizer service")


class FslTask(models.TextChoices):
    MT = "mt", _("Machine translation")
    SA = "sa", _("Sentiment analysis")
    MCQA = "mcqa", _("Multiple-choice question answering")


class ExemplarSampling(models.TextChoices):
    FIXED = "fixed", _("Same exemplars for every batch")
    RESAMPLED = "resampled", _("Exemplars redrawn per batch")
