from __future__ import annotations

from typing import Any

from django.conf import settings
from rest_framework import serializers

from apps.backends.choices import ExemplarSampling
from apps.backends.serializers import BackendEndpointSerializer
from apps.core.serializers import StrictSerializer
from apps.corpus.choices import DatasetKind
from apps.pipeline.choices import FilterStage, SimilarityMode, ThresholdMode

TASK_CHOICES = [
    (DatasetKind.SA.value, DatasetKind.SA.label),
    (DatasetKind.MCQA.value, DatasetKind.MCQA.label),
]


def _default_src_lang() -> str:
    return settings.CORPUSFORGE["SRC_LANG"]


def _default_tgt_lang() -> str:
    return settings.CORPUSFORGE["TGT_LANG"]


def _default_threshold() -> float:
    return settings.CORPUSFORGE["SIMILARITY_THRESHOLD"]


class PreprocessSerializer(StrictSerializer):
    length_filter = serializers.BooleanField(default=True)
    length_cutoff = serializers.IntegerField(min_value=1, required=False)
    excluded_choice_counts = serializers.ListField(
        child=serializers.IntegerField(min_value=0), required=False
    )
    choice_range = serializers.ListField(
        child=serializers.IntegerField(min_value=2),
        min_length=2,
        max_length=2,
        required=False,
    )

    def validate_choice_range(self, value: list[int]) -> list[int]:
        low, high = value
        if low > high:
            raise serializers.ValidationError(f"empty range {low}..{high}")
        return value


class RewriteSerializer(StrictSerializer):
    enabled = serializers.BooleanField(default=False)
    endpoint = serializers.CharField(required=False)
    instruction = serializers.CharField(required=False, trim_whitespace=False)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if attrs["enabled"]:
            for name in ("endpoint", "instruction"):
                if not attrs.get(name):
                    raise serializers.ValidationError(
                        {name: ["required when rewriting is enabled"]}
                    )
        return attrs


class TranslateSerializer(StrictSerializer):
    endpoint = serializers.CharField()
    exemplars = serializers.CharField(required=False)
    shots = serializers.IntegerField(min_value=0, required=False)
    sampling = serializers.ChoiceField(
        choices=ExemplarSampling.choices, default=ExemplarSampling.FIXED
    )


class SimilaritySerializer(StrictSerializer):
    endpoint = serializers.CharField()
    mode = serializers.ChoiceField(
        choices=SimilarityMode.choices, default=SimilarityMode.FIXED
    )
    threshold = serializers.FloatField(
        min_value=-1.0, max_value=1.0, default=_default_threshold
    )
    reference = serializers.CharField(required=False)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if attrs["mode"] == SimilarityMode.REFERENCE and not attrs.get("reference"):
            raise serializers.ValidationError(
                {"reference": ["required in reference mode"]}
            )
        return attrs


class BacktranslateSerializer(StrictSerializer):
    endpoint = serializers.CharField(required=False)


class RoundTripSerializer(StrictSerializer):
    mode = serializers.ChoiceField(
        choices=ThresholdMode.choices, default=ThresholdMode.DATA_MEAN
    )
    mu_bleu = serializers.FloatField(min_value=0.0, max_value=100.0, required=False)
    mu_meteor = serializers.FloatField(min_value=0.0, max_value=1.0, required=False)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if attrs["mode"] == ThresholdMode.FIXED:
            for name in ("mu_bleu", "mu_meteor"):
                if name not in attrs:
                    raise serializers.ValidationError(
                        {name: ["required with fixed thresholds"]}
                    )
        return attrs


class RunConfigSerializer(StrictSerializer):
    """Shape of ``pipeline.json``."""

    task = serializers.ChoiceField(choices=TASK_CHOICES)
    input = serializers.CharField()
    output_dir = serializers.CharField(default="out")
    checkpoint_dir = serializers.CharField(required=False)
    src_lang = serializers.CharField(default=_default_src_lang)
    tgt_lang = serializers.CharField(default=_default_tgt_lang)
    seed = serializers.IntegerField(default=0)
    endpoints = serializers.DictField(child=BackendEndpointSerializer())
    preprocess = PreprocessSerializer(required=False)
    rewrite = RewriteSerializer(required=False)
    translate = TranslateSerializer()
    similarity = SimilaritySerializer()
    backtranslate = BacktranslateSerializer(required=False)
    roundtrip = RoundTripSerializer(required=False)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if attrs["src_lang"] == attrs["tgt_lang"]:
            raise serializers.ValidationError(
                {"tgt_lang": ["must differ from src_lang"]}
            )
        defined = attrs["endpoints"]
        for section in ("rewrite", "translate", "similarity", "backtranslate"):
            name = attrs.get(section, {}).get("endpoint")
            if name is not None and name not in defined:
                raise serializers.ValidationError(
                    {section: [f"endpoint {name!r} is not defined under endpoints"]}
                )
        return attrs


class RoundTripRecordSerializer(StrictSerializer):
    id = serializers.CharField(trim_whitespace=False)
    src_original = serializers.CharField(trim_whitespace=False, allow_blank=True)
    fwd_translation = serializers.CharField(trim_whitespace=False, allow_blank=True)
    back_translation = serializers.CharField(trim_whitespace=False, allow_blank=True)
    bleu = serializers.FloatField(min_value=0.0, max_value=100.0)
    meteor = serializers.FloatField(min_value=0.0, max_value=1.0)
    cosine = serializers.FloatField(
        min_value=-1.0, max_value=1.0, allow_null=True, required=False
    )


class FilterDecisionSerializer(StrictSerializer):
    id = serializers.CharField(trim_whitespace=False)
    stage = serializers.ChoiceField(choices=FilterStage.choices)
    scores = serializers.DictField(child=serializers.FloatField())
    thresholds = serializers.DictField(child=serializers.FloatField())
    passed = serializers.BooleanField()
    note = serializers.CharField(required=False, allow_blank=True)
