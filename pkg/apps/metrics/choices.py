from __future__ import annotations

from django.db import models
from django.utils.translation import gettext_lazy as _


class TokenizeScheme(models.TextChoices):
    WORD = "word", _("Word (13a)")
    CHAR = "char", _("Character")


class F1Mode(models.TextChoices):
    BINARY_POSITIVE = "binary_positive", _("F1 of the positive class")
    MACRO = "macro", _("Macro-averaged F1")


class MetricId(models.TextChoices):
    BLEU = "bleu", _("BLEU")
    CHRF_PP = "chrf++", _("chrF++")
    ROUGE_L = "rouge-l-f1", _("ROUGE-L F1")
    METEOR = "meteor-exact", _("METEOR (exact match)")
    COSINE = "cosine", _("Cosine similarity")
