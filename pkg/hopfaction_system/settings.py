"""
Django settings for hopfaction_system project.

Generated by 'django-admin startproject' using Django 5.2.1.

For more information on this file, see
https://docs.djangoproject.com/en/5.2/topics/settings/

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Quick-start development settings - unsuitable for production
# See https://docs.djangoproject.com/en/5.2/howto/deployment/checklist/

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    'HOPF_SECRET_KEY',
    'django-insecure-7c1q$exact-cyclotomic-actions-desk-scale!k2v9w',
)

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get('HOPF_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition
# Only management commands are exposed; there is no URL configuration.

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'rest_framework',
    'app',
]

MIDDLEWARE = []


# Database
# https://docs.djangoproject.com/en/5.2/ref/settings/#databases
# Nothing is persisted; the test runner still expects a configured alias.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.path.join(BASE_DIR, 'db.sqlite3'),
    }
}


# Internationalization
# https://docs.djangoproject.com/en/5.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/5.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Logging
# https://docs.djangoproject.com/en/5.2/topics/logging/

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
            # stdout is reserved for JSON documents
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'app': {
            'handlers': ['console'],
            'level': os.environ.get('HOPF_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}


# Exact-arithmetic engine settings
# Read through getattr(settings, ..., default) so tests can override them.

# Seed for every random conjugator, combination or fixture
HOPF_DEFAULT_SEED = 20240601

# Worker threads used by enumerate_and_dedupe for the pairwise iso matrix
HOPF_ENUMERATE_WORKERS = 4

# Random combinations tried inside an intertwiner space before falling back
# to the symbolic determinant
HOPF_RANDOM_TRIALS = 8

# Largest intertwiner-space dimension handed to the symbolic determinant;
# anything bigger is reported undecided
HOPF_DETERMINANT_MAX_VARIABLES = 6

# Desk-scale guards
HOPF_MAX_GROUP_ORDER = 512
HOPF_MAX_MATRIX_SIZE = 16
