from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

from apps.backends.choices import EndpointKind
from apps.core.exceptions import ConfigError

ENDPOINT_PATHS = {
    EndpointKind.TRANSLATE: "/translate",
    EndpointKind.EMBED: "/embed",
    EndpointKind.CHAT: "/generate",
    EndpointKind.TOKENIZE: "/tokenize",
}


def api_key_variable(name: str) -> str:
    return "CF_" + re.sub(r"[^A-Z0-9]+", "_", name.upper()).strip("_") + "_KEY"


@dataclass(frozen=True)
class BackendEndpoint:
    """An external model service declared in the run configuration."""

    name: str
    base_url: str
    kind: str
    timeout: float = 60.0
    max_retries: int = 3
    batch_size: int = 32
    max_in_flight: int = 1
    api_key: str | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in EndpointKind.values:
            raise ConfigError(f"endpoint {self.name!r}: unknown kind {self.kind!r}")
        if self.batch_size < 1:
            raise ConfigError(f"endpoint {self.name!r}: batch_size must be >= 1")
        if self.max_retries < 0:
            raise ConfigError(f"endpoint {self.name!r}: max_retries must be >= 0")
        if self.max_in_flight < 1:
            raise ConfigError(f"endpoint {self.name!r}: max_in_flight must be >= 1")
        if self.timeout <= 0:
            raise ConfigError(f"endpoint {self.name!r}: timeout must be positive")

    @classmethod
    def from_config(cls, name: str, options: dict) -> BackendEndpoint:
        """Build from a validated config block; the API key is read from the env."""
        return cls(
            name=name,
            api_key=os.environ.get(api_key_variable(name)) or None,
            **options,
        )

    @property
    def url(self) -> str:
        return self.base_url.rstrip("/") + ENDPOINT_PATHS[self.kind]

    def require_kind(self, *kinds: str) -> None:
        if self.kind not in kinds:
            expected = " or ".join(kinds)
            raise ConfigError(
                f"endpoint {self.name!r} is a {self.kind} endpoint, expected {expected}"
            )
