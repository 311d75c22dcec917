from __future__ import annotations

import functools
import hashlib
import json
import logging
import pickle
from typing import Any, Callable, ParamSpec, TypeVar

from django.conf import settings
from django.core.cache import cache

logger = logging.getLogger(__name__)

P = ParamSpec("P")
T = TypeVar("T")


def redis_cached(
    ttl: int = 3_600,
    *,
    ttl_setting: str | None = None,
    key_func: Callable[..., Any] | None = None,
) -> Callable[[Callable[P, T]], Callable[P, T]]:
    """
    Decorator to cache a function's return value in the default cache for
    *ttl* seconds (Redis in production).

    ``ttl_setting`` names a key of ``settings.CORPUSFORGE`` read on every call,
    so tests and runs can switch caching off by setting it to 0.
    ``key_func`` receives the call arguments and returns what the cache key is
    derived from; use it when arguments are not picklable (clients, sessions).
    The wrapper gains ``evict(*args, **kwargs)`` to drop one stored result,
    for callers that only find a result unusable after it was cached.

    Usage
    -----
    @redis_cached(ttl_setting="EMBED_CACHE_TTL", key_func=lambda c, t: (c.url, t))
    def fetch_vectors(client, texts: tuple[str, ...]) -> list[list[float]]:
        ...
    """

    def decorator(func: Callable[P, T]) -> Callable[P, T]:
        prefix = f"{func.__module__}.{func.__qualname__}"

        def cache_key_for(*args: Any, **kwargs: Any) -> str:
            if key_func is not None:
                key_data = (prefix, key_func(*args, **kwargs))
            else:
                key_data = (prefix, args, kwargs)
            try:
                key_bytes = pickle.dumps(key_data)
            except Exception:
                key_bytes = json.dumps(str(key_data)).encode()
            return f"redis_cached:{hashlib.md5(key_bytes).hexdigest()}"

        @functools.wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
            timeout = ttl
            if ttl_setting is not None:
                timeout = settings.CORPUSFORGE.get(ttl_setting, ttl)
            if not timeout:
                return func(*args, **kwargs)

            cache_key = cache_key_for(*args, **kwargs)

            cached: T | None = cache.get(cache_key)
            if cached is not None:
                logger.debug("Cache hit → %s", cache_key)
                return cached

            result: T = func(*args, **kwargs)
            cache.set(cache_key, result, timeout=timeout)
            logger.debug("Cache miss → %s (stored %ss)", cache_key, timeout)
            return result

        def evict(*args: Any, **kwargs: Any) -> None:
            """Drop the entry stored for these arguments, if any."""
            cache.delete(cache_key_for(*args, **kwargs))

        wrapper.evict = evict  # type: ignore[attr-defined]
        return wrapper

    return decorator
