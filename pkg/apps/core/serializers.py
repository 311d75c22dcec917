from __future__ import annotations

from typing import Any

from rest_framework import serializers


def flatten_errors(detail: Any, prefix: str = "") -> str:
    """Render a DRF error detail tree as one line: ``field: message; ...``."""
    if isinstance(detail, dict):
        parts = []
        for key, value in detail.items():
            label = "" if key == "non_field_errors" else str(key)
            name = f"{prefix}.{label}" if prefix and label else (label or prefix)
            parts.append(flatten_errors(value, name))
        return "; ".join(part for part in parts if part)
    if isinstance(detail, list):
        return "; ".join(flatten_errors(item, prefix) for item in detail)
    return f"{prefix}: {detail}" if prefix else str(detail)


class StrictSerializer(serializers.Serializer):
    """Rejects keys it does not declare instead of silently dropping them."""

    def to_internal_value(self, data: Any) -> dict[str, Any]:
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {"non_field_errors": [f"unexpected field(s) {', '.join(unknown)}"]}
                )
        return super().to_internal_value(data)
