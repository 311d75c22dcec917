from __future__ import annotations

import logging
import math
from typing import Any, Sequence, Union

from apps.backends.choices import EndpointKind
from apps.backends.endpoints import BackendEndpoint
from apps.backends.transport import BackendClient
from apps.core.cache_utils import redis_cached
from apps.core.exceptions import DataError, ProtocolError, ResponseCountError
from apps.metrics.similarity import EmbeddingVector

logger = logging.getLogger(__name__)

Target = Union[BackendEndpoint, BackendClient]


def as_client(target: Target) -> BackendClient:
    return target if isinstance(target, BackendClient) else BackendClient(target)


def _string_list(body: Any, key: str, client: BackendClient) -> list[str]:
    values = body.get(key) if isinstance(body, dict) else None
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise ProtocolError(
            f"{client.endpoint.name}: response needs a list of strings under {key!r}"
        )
    return values


def translate_batch(
    target: Target, texts: Sequence[str], src_lang: str, tgt_lang: str
) -> list[str]:
    """Translate *texts* keeping their order; any list length is split into batches."""
    client = as_client(target)
    client.endpoint.require_kind(EndpointKind.TRANSLATE)
    if not texts:
        raise DataError("translate_batch needs at least one text")

    def request(batch: list[str], start: int, stop: int) -> list[str]:
        body = client.post(
            {"texts": batch, "src_lang": src_lang, "tgt_lang": tgt_lang}, start, stop
        )
        return _string_list(body, "translations", client)

    return client.map_batches(list(texts), request)


def _embedding_cache_key(client: BackendClient, texts: tuple[str, ...], start=0):
    return client.endpoint.url, texts


@redis_cached(ttl_setting="EMBED_CACHE_TTL", key_func=_embedding_cache_key)
def _fetch_vectors(
    client: BackendClient, texts: tuple[str, ...], start: int = 0
) -> list[list[float]]:
    body = client.post({"texts": list(texts)}, start, start + len(texts))
    name = client.endpoint.name
    if not isinstance(body, dict) or not isinstance(body.get("vectors"), list):
        raise ProtocolError(f"{name}: response needs a 'vectors' list")
    vectors = body["vectors"]
    if len(vectors) != len(texts):
        raise ResponseCountError(
            f"{name}: batch of items {start}..{start + len(texts) - 1} "
            f"returned {len(vectors)} vector(s) for {len(texts)} input(s)"
        )
    dim = body.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ProtocolError(f"{name}: response needs a positive integer 'dim'")
    for vector in vectors:
        if not isinstance(vector, list) or len(vector) != dim:
            raise ProtocolError(
                f"{name}: non-uniform vector dimensions (declared {dim})"
            )
        if not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)
            for v in vector
        ):
            raise ProtocolError(f"{name}: vector holds NaN or non-numeric values")
    return [[float(v) for v in vector] for vector in vectors]


def embed_batch(target: Target, texts: Sequence[str]) -> list[EmbeddingVector]:
    """
    One embedding per text. Batches are cached per endpoint URL and batch
    texts for ``EMBED_CACHE_TTL`` seconds.
    """
    client = as_client(target)
    client.endpoint.require_kind(EndpointKind.EMBED)
    if not texts:
        raise DataError("embed_batch needs at least one text")

    requested: list[tuple[tuple[str, ...], int]] = []

    def request(batch: list[str], start: int, stop: int) -> list[list[float]]:
        key = (tuple(batch), start)
        requested.append(key)
        return _fetch_vectors(client, *key)

    vectors = client.map_batches(list(texts), request)
    dims = {len(vector) for vector in vectors}
    if len(dims) > 1:
        for batch, start in requested:
            _fetch_vectors.evict(client, batch, start)
        raise ProtocolError(
            f"{client.endpoint.name}: batches returned different dimensions "
            f"{sorted(dims)}"
        )
    return [EmbeddingVector(tuple(vector)) for vector in vectors]


def generate(
    target: Target, prompt: str, start: int = 0, stop: int | None = None
) -> str:
    client = as_client(target)
    client.endpoint.require_kind(EndpointKind.CHAT)
    body = client.post({"prompt": prompt}, start, stop)
    text = body.get("text") if isinstance(body, dict) else None
    if not isinstance(text, str):
        raise ProtocolError(f"{client.endpoint.name}: response needs a 'text' string")
    return text


def llm_rewrite(target: Target, texts: Sequence[str], instruction: str) -> list[str]:
    """One chat request per text: the instruction, a blank line, then the text."""
    client = as_client(target)
    client.endpoint.require_kind(EndpointKind.CHAT)
    if not instruction.strip():
        raise DataError("llm_rewrite needs a non-empty instruction")
    if not texts:
        raise DataError("llm_rewrite needs at least one text")

    def request(batch: list[str], start: int, stop: int) -> list[str]:
        return [
            generate(client, f"{instruction}\n\n{text}", start + offset)
            for offset, text in enumerate(batch)
        ]

    return client.map_batches(list(texts), request)


def count_tokens(target: Target, texts: Sequence[str]) -> list[int]:
    client = as_client(target)
    client.endpoint.require_kind(EndpointKind.TOKENIZE)
    if not texts:
        raise DataError("count_tokens needs at least one text")

    def request(batch: list[str], start: int, stop: int) -> list[int]:
        body = client.post({"texts": batch}, start, stop)
        counts = body.get("counts") if isinstance(body, dict) else None
        if not isinstance(counts, list) or not all(
            isinstance(c, int) and not isinstance(c, bool) and c >= 0 for c in counts
        ):
            raise ProtocolError(
                f"{client.endpoint.name}: response needs a list of 'counts'"
            )
        return counts

    return client.map_batches(list(texts), request)
