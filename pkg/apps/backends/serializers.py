from __future__ import annotations

from rest_framework import serializers

from apps.backends.choices import EndpointKind
from apps.core.serializers import StrictSerializer


class BackendEndpointSerializer(StrictSerializer):
    base_url = serializers.URLField()
    kind = serializers.ChoiceField(choices=EndpointKind.choices)
    timeout = serializers.FloatField(min_value=0.001, default=60.0)
    max_retries = serializers.IntegerField(min_value=0, default=3)
    batch_size = serializers.IntegerField(min_value=1, default=32)
    max_in_flight = serializers.IntegerField(min_value=1, default=1)


class EndpointsSerializer(serializers.Serializer):
    """The ``endpoints`` block of a pipeline config; other keys are ignored."""

    endpoints = serializers.DictField(
        child=BackendEndpointSerializer(), allow_empty=False
    )
