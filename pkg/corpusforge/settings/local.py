from .base import *  # noqa: F403,F401

DEBUG = True

CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "corpusforge-local",
    }
}
