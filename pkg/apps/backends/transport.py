from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Sequence, TypeVar

import requests
from django.conf import settings
from requests.exceptions import RequestException

from apps.backends.audit import AuditLog
from apps.backends.endpoints import BackendEndpoint
from apps.core.exceptions import ProtocolError, TransportError

logger = logging.getLogger(__name__)

RETRIABLE_STATUS = {429, 500, 502, 503, 504}

T = TypeVar("T")
R = TypeVar("R")


def _retry_after_seconds(resp: requests.Response | None) -> float | None:
    if resp is None:
        return None
    value = resp.headers.get("Retry-After")
    if not value:
        return None
    try:
        return float(value)
    except ValueError:
        return None


class BackendClient:
    """
    JSON-over-HTTP client for one endpoint.

    Transient failures (connection errors, timeouts, 429 and 5xx) are retried
    with exponential back-off up to ``endpoint.max_retries`` times; any other
    HTTP error fails at once. Instances are safe to share across threads.
    """

    def __init__(
        self,
        endpoint: BackendEndpoint,
        session: requests.Session | None = None,
        audit: AuditLog | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.endpoint = endpoint
        self.session = session if session is not None else requests.Session()
        self.audit = audit
        self.sleep = sleep

    def __repr__(self) -> str:
        return f"<BackendClient {self.endpoint.name} {self.endpoint.url}>"

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json; charset=utf-8"}
        if self.endpoint.api_key:
            headers["Authorization"] = f"Bearer {self.endpoint.api_key}"
        return headers

    def _backoff(self, attempt: int, retry_after: float | None) -> float:
        config = settings.CORPUSFORGE
        delay = config["RETRY_BACKOFF"] * (2**attempt)
        if retry_after is not None:
            delay = max(delay, retry_after)
        return min(config["MAX_BACKOFF"], delay)

    def post(self, payload: dict[str, Any], start: int = 0, stop: int | None = None):
        """POST *payload*; ``start``/``stop`` name the input items it carries."""
        endpoint = self.endpoint
        stop = start + 1 if stop is None else stop
        attempt = 0

        while True:
            retry_after = None
            try:
                resp = self.session.post(
                    endpoint.url,
                    json=payload,
                    headers=self._headers(),
                    timeout=endpoint.timeout,
                )
                resp.raise_for_status()
            except requests.HTTPError as exc:
                status = exc.response.status_code if exc.response is not None else None
                if status not in RETRIABLE_STATUS:
                    message = f"{endpoint.name}: HTTP {status} from {endpoint.url}"
                    raise TransportError(message, start, stop) from exc
                failure = f"HTTP {status}"
                retry_after = _retry_after_seconds(exc.response)
            except RequestException as exc:
                failure = f"{type(exc).__name__}: {exc}"
            else:
                try:
                    body = resp.json()
                except ValueError as exc:
                    raise ProtocolError(
                        f"{endpoint.name}: response for items {start}..{stop - 1} "
                        "is not JSON"
                    ) from exc
                if self.audit is not None:
                    self.audit.record(endpoint.name, endpoint.kind, payload, body)
                return body

            if attempt >= endpoint.max_retries:
                raise TransportError(
                    f"{endpoint.name}: giving up after {attempt + 1} attempt(s), "
                    f"last failure {failure}",
                    start,
                    stop,
                )
            delay = self._backoff(attempt, retry_after)
            attempt += 1
            logger.warning(
                "%s: %s for items %d..%d → retry %d/%d in %.2fs",
                endpoint.name,
                failure,
                start,
                stop - 1,
                attempt,
                endpoint.max_retries,
                delay,
            )
            self.sleep(delay)

    def map_batches(
        self,
        items: Sequence[T],
        request: Callable[[list[T], int, int], list[R]],
        batch_size: int | None = None,
    ) -> list[R]:
        """
        Run ``request(chunk, start, stop)`` over ``batch_size`` chunks of *items*.

        Up to ``endpoint.max_in_flight`` chunks are in flight at once; results
        are reassembled in input order and every chunk must return exactly one
        result per input.
        """
        size = batch_size or self.endpoint.batch_size
        chunks = [
            (start, list(items[start : start + size]))
            for start in range(0, len(items), size)
        ]

        def run(chunk: tuple[int, list[T]]) -> list[R]:
            start, batch = chunk
            stop = start + len(batch)
            results = list(request(batch, start, stop))
            if len(results) != len(batch):
                raise ProtocolError(
                    f"{self.endpoint.name}: batch of items {start}..{stop - 1} "
                    f"returned {len(results)} result(s) for {len(batch)} input(s)"
                )
            return results

        workers = min(self.endpoint.max_in_flight, len(chunks))
        if workers <= 1:
            batches = [run(chunk) for chunk in chunks]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                batches = list(pool.map(run, chunks))

        logger.info(
            "%s: %d item(s) in %d batch(es)",
            self.endpoint.name,
            len(items),
            len(chunks),
        )
        return [result for batch in batches for result in batch]
