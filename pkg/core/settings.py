"""
Django settings for the sqrt(NOT) gate simulator.

Hosts the management commands (gate, sweep, extrema, verify) and a small
JSON API over the same services. No database-backed models.
"""

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-dev-key-change-in-production')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get('DJANGO_DEBUG', 'True').lower() == 'true'

ALLOWED_HOSTS = os.environ.get('DJANGO_ALLOWED_HOSTS', 'localhost,127.0.0.1,testserver').split(',')

# Add Render.com hosts
RENDER_EXTERNAL_HOSTNAME = os.environ.get('RENDER_EXTERNAL_HOSTNAME')
if RENDER_EXTERNAL_HOSTNAME:
    ALLOWED_HOSTS.append(RENDER_EXTERNAL_HOSTNAME)

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    # Third-party apps
    'rest_framework',
    'corsheaders',
    # Local apps
    'gates',
]

MIDDLEWARE = [
    'corsheaders.middleware.CorsMiddleware',  # Must be before CommonMiddleware
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'core.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
            ],
        },
    },
]

WSGI_APPLICATION = 'core.wsgi.application'

# Nothing is persisted; SQLite only backs Django's test runner.
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

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# ============================================
# Django REST Framework Configuration
# ============================================
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'UNAUTHENTICATED_USER': None,
    'EXCEPTION_HANDLER': 'rest_framework.views.exception_handler',
}

# ============================================
# CORS Configuration
# ============================================
CORS_ALLOWED_ORIGINS = os.environ.get(
    'CORS_ALLOWED_ORIGINS',
    'http://localhost:3000,http://127.0.0.1:3000,http://localhost:5173'
).split(',')

CORS_ALLOW_METHODS = [
    'GET',
    'OPTIONS',
    'POST',
]

# ============================================
# Simulator Configuration
# Every key can be overridden with a GATE_<KEY> environment variable.
# ============================================
GATE_CONFIG = {
    'KAPPA_MIN': float(os.environ.get('GATE_KAPPA_MIN', '-10')),
    'KAPPA_MAX': float(os.environ.get('GATE_KAPPA_MAX', '10')),
    'SWEEP_POINTS': int(os.environ.get('GATE_SWEEP_POINTS', '2001')),
    'EXTREMA_SCAN_POINTS': int(os.environ.get('GATE_EXTREMA_SCAN_POINTS', '10000')),
    'BRUTE_SCAN_POINTS': int(os.environ.get('GATE_BRUTE_SCAN_POINTS', '100000')),
    'CSV_PRECISION': int(os.environ.get('GATE_CSV_PRECISION', '12')),
    'VERIFY_SEED': int(os.environ.get('GATE_VERIFY_SEED', '42')),
    'MC_ELECTRONS': int(os.environ.get('GATE_MC_ELECTRONS', '1000000')),
    'SIGMA_THRESHOLD': float(os.environ.get('GATE_SIGMA_THRESHOLD', '3')),
    'CHUNK_SIZE': int(os.environ.get('GATE_CHUNK_SIZE', '50000')),
}

# ============================================
# Logging Configuration
# Logs go to stderr so command reports on stdout stay byte-identical.
# ============================================
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'gates': {
            'handlers': ['console'],
            'level': os.environ.get('GATE_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}

# ============================================
# Production Security Settings
# ============================================
if not DEBUG:
    SECURE_PROXY_SSL_HEADER = ('HTTP_X_FORWARDED_PROTO', 'https')
    SECURE_SSL_REDIRECT = os.environ.get('DJANGO_SECURE_SSL_REDIRECT', 'True').lower() == 'true'
    SECURE_HSTS_SECONDS = 31536000  # 1 year
    SECURE_HSTS_INCLUDE_SUBDOMAINS = True
    SECURE_CONTENT_TYPE_NOSNIFF = True
    X_FRAME_OPTIONS = 'DENY'
