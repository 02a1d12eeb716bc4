import os
from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-certify-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'certify',
]

# Database
if 'DATABASE_URL' in os.environ:
    import dj_database_url
    DATABASES = {
        'default': dj_database_url.parse(os.environ.get('DATABASE_URL'))
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': BASE_DIR / 'db.sqlite3',
        }
    }

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Resource budgets; every estimator projects its cost against these and refuses above them
CERTIFY_MAX_PATTERNS = config('CERTIFY_MAX_PATTERNS', default=2 ** 20, cast=int)
CERTIFY_MAX_STATES = config('CERTIFY_MAX_STATES', default=2 ** 20, cast=int)
CERTIFY_MAX_MATRIX_DIM = config('CERTIFY_MAX_MATRIX_DIM', default=2 ** 14, cast=int)
CERTIFY_MAX_LEVEL = config('CERTIFY_MAX_LEVEL', default=4, cast=int)
CERTIFY_WALL_CLOCK_HINT = config('CERTIFY_WALL_CLOCK_HINT', default=120, cast=int)  # seconds, logged only

CERTIFY_PRECISION_BITS = config('CERTIFY_PRECISION_BITS', default=128, cast=int)
CERTIFY_DEFAULT_BOX_SIDE = config('CERTIFY_DEFAULT_BOX_SIDE', default=8, cast=int)
CERTIFY_DETERMINISTIC = config('CERTIFY_DETERMINISTIC', default=True, cast=bool)

# Run ledger
CERTIFY_RUN_RETENTION_DAYS = config('CERTIFY_RUN_RETENTION_DAYS', default=30, cast=int)

# Logging; reports go to stdout, logs never do
CERTIFY_LOG_FILE = config('CERTIFY_LOG_FILE', default='certify.log')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': 'DEBUG',
            'class': 'logging.FileHandler',
            'filename': CERTIFY_LOG_FILE,
            'formatter': 'verbose',
        },
        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['file'],
            'level': 'INFO',
            'propagate': True,
        },
        'certify': {
            'handlers': ['file', 'console'],
            'level': 'DEBUG' if DEBUG else 'INFO',
            'propagate': False,
        },
    },
}
