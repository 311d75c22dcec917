from __future__ import annotations

from typing import Any

from rest_framework import serializers

from apps.core.serializers import StrictSerializer
from apps.corpus.choices import SentimentLabel


class RecordSerializer(StrictSerializer):
    """
    Base for JSONL record validation.

    Keys the record kind does not declare are rejected so that a file of the
    wrong kind fails loudly. ``context["strict"] = False`` keeps type and range
    checks but skips the non-blank/distinctness invariants (checkpointed
    translations may legitimately violate them).
    """

    integer_fields: tuple[str, ...] = ()

    id = serializers.CharField(required=False, trim_whitespace=False)

    @property
    def strict(self) -> bool:
        return self.context.get("strict", True)

    def to_internal_value(self, data: Any) -> dict[str, Any]:
        if isinstance(data, dict):
            for name in self.integer_fields:
                value = data.get(name)
                if isinstance(value, bool) or (
                    value is not None and not isinstance(value, int)
                ):
                    raise serializers.ValidationError({name: ["must be an integer"]})
        return super().to_internal_value(data)

    def require_text(self, value: str) -> str:
        if self.strict and not value.strip():
            raise serializers.ValidationError("must not be blank")
        return value


class SAEntrySerializer(RecordSerializer):
    integer_fields = ("label",)

    text = serializers.CharField(trim_whitespace=False, allow_blank=True)
    label = serializers.ChoiceField(choices=SentimentLabel.choices)

    def validate_text(self, value: str) -> str:
        return self.require_text(value)


class MCQAEntrySerializer(RecordSerializer):
    integer_fields = ("answer",)

    question = serializers.CharField(trim_whitespace=False, allow_blank=True)
    choices = serializers.ListField(
        child=serializers.CharField(trim_whitespace=False, allow_blank=True),
        min_length=2,
    )
    answer = serializers.IntegerField(min_value=0)

    def validate_question(self, value: str) -> str:
        return self.require_text(value)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        choices = attrs["choices"]
        answer = attrs["answer"]
        if answer >= len(choices):
            message = f"index {answer} out of range for {len(choices)} choices"
            raise serializers.ValidationError({"answer": [message]})
        if self.strict:
            if any(not choice.strip() for choice in choices):
                raise serializers.ValidationError({"choices": ["must not be blank"]})
            if len(set(choices)) != len(choices):
                raise serializers.ValidationError(
                    {"choices": ["must be pairwise distinct"]}
                )
        return attrs


class ParallelPairSerializer(RecordSerializer):
    src = serializers.CharField(trim_whitespace=False, allow_blank=True)
    tgt = serializers.CharField(trim_whitespace=False, allow_blank=True)
    src_lang = serializers.CharField()
    tgt_lang = serializers.CharField()

    def validate_src(self, value: str) -> str:
        return self.require_text(value)

    def validate_tgt(self, value: str) -> str:
        return self.require_text(value)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        if attrs["src_lang"] == attrs["tgt_lang"]:
            raise serializers.ValidationError(
                {"tgt_lang": ["must differ from src_lang"]}
            )
        return attrs
