"""
Django settings for lens_torsion_main project.

Everything environment-specific is read from environment variables; the
LENS_* values are the numerical tolerances of the torsion pipeline.
"""

import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, default))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "dev-secret-key-change-me")

DEBUG = os.getenv("DJANGO_DEBUG", "True").lower() == "true"

ALLOWED_HOSTS = [h for h in os.getenv("DJANGO_ALLOWED_HOSTS", "*").split(",") if h]


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'torsion',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
]

ROOT_URLCONF = 'lens_torsion_main.urls'

WSGI_APPLICATION = 'lens_torsion_main.wsgi.application'

# Results are computed on demand; nothing is persisted.
DATABASES = {}

REST_FRAMEWORK = {
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "DEFAULT_PERMISSION_CLASSES": ["rest_framework.permissions.AllowAny"],
    "DEFAULT_RENDERER_CLASSES": ["rest_framework.renderers.JSONRenderer"],
    "DEFAULT_PARSER_CLASSES": ["rest_framework.parsers.JSONParser"],
    "UNAUTHENTICATED_USER": None,
    "TEST_REQUEST_DEFAULT_FORMAT": "json",
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Torsion pipeline tolerances

LENS_DELTA_MIN = _env_float("LENS_DELTA_MIN", 1e-6)
LENS_RANK_TOL = _env_float("LENS_RANK_TOL", 1e-9)
LENS_RESIDUAL_TOL = _env_float("LENS_RESIDUAL_TOL", 1e-8)
LENS_BLOCK_TOL = _env_float("LENS_BLOCK_TOL", 1e-9)
LENS_COMPARE_TOL = _env_float("LENS_COMPARE_TOL", 1e-6)
LENS_RELATIVE_FLOOR = _env_float("LENS_RELATIVE_FLOOR", 1e-12)

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple"},
    },
    "loggers": {
        "torsion": {
            "handlers": ["console"],
            "level": os.getenv("LENS_LOG_LEVEL", "WARNING"),
            "propagate": False,
        },
    },
}

# Celery / Redis
# Sweeps run in-process unless LENS_CELERY_EAGER is switched off and a broker is reachable.
CELERY_BROKER_URL = os.getenv("REDIS_URL", "redis://redis:6379/0")
CELERY_RESULT_BACKEND = os.getenv("REDIS_URL", "redis://redis:6379/0")
CELERY_TASK_SERIALIZER = "json"
CELERY_RESULT_SERIALIZER = "json"
CELERY_ACCEPT_CONTENT = ["json"]
CELERY_TASK_ALWAYS_EAGER = os.getenv("LENS_CELERY_EAGER", "True").lower() == "true"
CELERY_TASK_EAGER_PROPAGATES = True
if os.getenv("LENS_WORKERS"):
    CELERY_WORKER_CONCURRENCY = int(os.getenv("LENS_WORKERS"))
