from .base import *  # noqa: F403,F401

DEBUG = True
TESTING = True

CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "corpusforge-test",
    }
}

CORPUSFORGE = {
    **CORPUSFORGE,  # noqa: F405
    "EMBED_CACHE_TTL": 0,
    "RETRY_BACKOFF": 0.0,
    "AUDIT_RESPONSES": True,
}
