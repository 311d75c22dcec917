from __future__ import annotations

import logging
import random
from typing import Callable, Sequence, TypeVar

from django.conf import settings

from apps.backends.choices import EndpointKind, ExemplarSampling, FslTask
from apps.backends.clients import Target, as_client, generate
from apps.backends.parsing import parse_fsl_response
from apps.backends.prompts import FslExampleBank, Query, build_fsl_prompt, language_name
from apps.backends.transport import BackendClient
from apps.core.exceptions import ConfigError, ResponseParseError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _ask(
    client: BackendClient,
    prompt: str,
    parse: Callable[[str], list[T]],
    start: int,
    stop: int,
) -> list[T]:
    """Send one prompt; unparseable answers are re-asked up to ``max_retries`` times."""
    attempt = 0
    while True:
        raw = generate(client, prompt, start, stop)
        try:
            return parse(raw)
        except ResponseParseError as exc:
            if attempt >= client.endpoint.max_retries:
                raise
            attempt += 1
            logger.warning(
                "%s: unusable answer for items %d..%d (%s) → asking again (%d/%d)",
                client.endpoint.name,
                start,
                stop - 1,
                exc,
                attempt,
                client.endpoint.max_retries,
            )


def _exemplars(bank: FslExampleBank, sampling: str, seed: int, start: int) -> list:
    # seeded per batch offset so results do not depend on scheduling
    return bank.select(sampling, random.Random(f"{seed}:{start}"))


def fsl_translate(
    target: Target,
    bank: FslExampleBank,
    texts: Sequence[str],
    src_lang: str,
    tgt_lang: str,
    *,
    sampling: str = ExemplarSampling.FIXED,
    seed: int = 0,
    batch_size: int | None = None,
) -> list[str]:
    """Translate with a chat model prompted by exemplar pairs, 15 texts per prompt."""
    client = as_client(target)
    client.endpoint.require_kind(EndpointKind.CHAT)
    if bank.task != FslTask.MT:
        raise ConfigError(f"few-shot translation needs an mt bank, got {bank.task}")
    size = batch_size or settings.CORPUSFORGE["FSL_QUERY_BATCH"][FslTask.MT]
    target_field = language_name(tgt_lang)

    def request(batch: list[str], start: int, stop: int) -> list[str]:
        prompt = build_fsl_prompt(
            bank,
            batch,
            exemplars=_exemplars(bank, sampling, seed, start),
            src_lang=src_lang,
            tgt_lang=tgt_lang,
            batch_size=size,
        )
        return _ask(
            client,
            prompt,
            lambda raw: parse_fsl_response(
                raw, FslTask.MT, len(batch), target_field=target_field
            ),
            start,
            stop,
        )

    return client.map_batches(list(texts), request, batch_size=size)


def fsl_predict(
    target: Target,
    bank: FslExampleBank,
    entries: Sequence[Query],
    task: str,
    *,
    sampling: str = ExemplarSampling.FIXED,
    seed: int = 0,
    batch_size: int | None = None,
) -> list[int]:
    """Sentiment labels (``sa``) or answer indices (``mcqa``) from a chat model."""
    client = as_client(target)
    client.endpoint.require_kind(EndpointKind.CHAT)
    if task not in (FslTask.SA, FslTask.MCQA):
        raise ConfigError(f"few-shot prediction supports sa and mcqa, not {task!r}")
    if bank.task != task:
        raise ConfigError(f"{task} prediction needs a {task} bank, got {bank.task}")
    size = batch_size or settings.CORPUSFORGE["FSL_QUERY_BATCH"][task]

    def request(batch: list[Query], start: int, stop: int) -> list[int]:
        prompt = build_fsl_prompt(
            bank,
            batch,
            exemplars=_exemplars(bank, sampling, seed, start),
            batch_size=size,
        )
        n_choices = (
            [len(entry.choices) for entry in batch] if task == FslTask.MCQA else None
        )
        return _ask(
            client,
            prompt,
            lambda raw: parse_fsl_response(raw, task, len(batch), n_choices=n_choices),
            start,
            stop,
        )

    return client.map_batches(list(entries), request, batch_size=size)
