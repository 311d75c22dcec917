from __future__ import annotations

from rest_framework import serializers

from apps.core.serializers import StrictSerializer


class SuiteManifestSerializer(StrictSerializer):
    """``{"subsets": {"t1": "t1.jsonl", ...}, "direction": [src, tgt]}``"""

    subsets = serializers.DictField(child=serializers.CharField(), allow_empty=False)
    direction = serializers.ListField(
        child=serializers.CharField(), min_length=2, max_length=2
    )

    def validate_direction(self, value: list[str]) -> list[str]:
        if value[0] == value[1]:
            raise serializers.ValidationError("source and target must differ")
        return value


class PredictionSerializer(StrictSerializer):
    id = serializers.CharField(trim_whitespace=False)
    pred = serializers.IntegerField(min_value=0)
