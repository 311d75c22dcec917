from pathlib import Path
import os

BASE_DIR = Path(__file__).resolve().parent.parent.parent

SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "replace_me")

DEBUG = os.getenv("DJANGO_DEBUG", "True") != "False"

INSTALLED_APPS = [
    # third-party apps
    "rest_framework",
    # project apps
    "apps.core",
    "apps.corpus",
    "apps.metrics",
    "apps.backends",
    "apps.pipeline",
    "apps.evaluation",
    "apps.cli",
]

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = True
USE_TZ = True

# Corpora live in JSONL files; nothing is persisted through the ORM.
DATABASES = {}

CACHES = {
    "default": {
        "BACKEND": "django_redis.cache.RedisCache",
        "LOCATION": os.getenv("CF_REDIS_URL", "redis://redis:6379/0"),
        "OPTIONS": {
            "CLIENT_CLASS": "django_redis.client.DefaultClient",
        },
    }
}

REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
}

LOG_LEVEL = os.getenv("CF_LOG_LEVEL", "INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {
            "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
        },
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        "apps": {
            "handlers": ["stderr"],
            "level": LOG_LEVEL,
            "propagate": False,
        },
    },
}

CORPUSFORGE = {
    "SRC_LANG": os.getenv("CF_SRC_LANG", "ita_Latn"),
    "TGT_LANG": os.getenv("CF_TGT_LANG", "lld_Latn"),
    "LANGUAGE_NAMES": {
        "ita_Latn": "Italian",
        "lld_Latn": "Ladin",
    },
    "TGT_VARIANT": os.getenv("CF_TGT_VARIANT", "Val Badia"),
    "SIMILARITY_THRESHOLD": float(os.getenv("CF_SIMILARITY_THRESHOLD", "0.68")),
    "EXCLUDED_CHOICE_COUNTS": (2, 6),
    "CHOICE_RANGE": (3, 5),
    "FSL_QUERY_BATCH": {"mt": 15, "sa": 10, "mcqa": 10},
    "FSL_SHOTS": int(os.getenv("CF_FSL_SHOTS", "10")),
    "HISTOGRAM_BINS": 10,
    "REPORT_EXAMPLES": 5,
    "EMBED_CACHE_TTL": int(os.getenv("CF_EMBED_CACHE_TTL", str(60 * 60 * 24 * 7))),
    "RETRY_BACKOFF": float(os.getenv("CF_RETRY_BACKOFF", "1.0")),
    "MAX_BACKOFF": 60.0,
    "AUDIT_RESPONSES": os.getenv("CF_AUDIT_RESPONSES", "True") != "False",
}
