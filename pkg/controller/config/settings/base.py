"""
Django settings for the intent-forge controller.
Shared across all environments; dev.py and test.py override what they need.
"""

from pathlib import Path

from decouple import config

# Build paths inside the project
BASE_DIR = Path(__file__).resolve().parent.parent.parent
FIXTURES_DIR = BASE_DIR / 'fixtures'
DOCS_DIR = BASE_DIR / 'docs'

# Application definition: only the command layer is a Django app
INSTALLED_APPS = [
    'apps.cli',
]

USE_TZ = True
TIME_ZONE = 'UTC'

# Bundled fixture files
DEFAULT_CONFIG_FILE = FIXTURES_DIR / 'controller.yaml'
BENCHMARK_FIXTURES = FIXTURES_DIR / 'paper.fixtures.yaml'
ENVIRONMENT_FIXTURE = FIXTURES_DIR / 'environment.yaml'
CRITERIA_FILE = FIXTURES_DIR / 'criteria.yaml'
INTENTIONS_FILE = FIXTURES_DIR / 'intentions.yaml'
MODEL_CATALOG = FIXTURES_DIR / 'models.yaml'

# LLM endpoint (OpenAI-compatible chat completions)
LLM_API_KEY_ENV = 'INTENT_FORGE_API_KEY'
LLM_API_KEY = config(LLM_API_KEY_ENV, default='')
LLM_ENDPOINT = config('INTENT_FORGE_ENDPOINT', default='https://api.openai.com')
LLM_REQUEST_TIMEOUT = config('INTENT_FORGE_REQUEST_TIMEOUT', default=60.0, cast=float)
LLM_DEFAULT_TEMPERATURE = 0.0
LLM_DEFAULT_ROLE = 'You are a Python 3 code generator'
LLM_RETRY_BACKOFF = config('INTENT_FORGE_RETRY_BACKOFF', default=1.0, cast=float)
LIVE_CONCURRENCY = config('INTENT_FORGE_LIVE_CONCURRENCY', default=4, cast=int)

# Workflow sandbox limits
WORKFLOW_MAX_STEPS = config('INTENT_FORGE_MAX_STEPS', default=100_000, cast=int)
WORKFLOW_MAX_CALL_DEPTH = config('INTENT_FORGE_MAX_CALL_DEPTH', default=64, cast=int)
WORKFLOW_MAX_WALL_TIME = config('INTENT_FORGE_MAX_WALL_TIME', default=30.0, cast=float)
WORKFLOW_MAX_VALUE_SIZE = config('INTENT_FORGE_MAX_VALUE_SIZE', default=1_000_000, cast=int)

# Host environment
DEFAULT_SEED = config('INTENT_FORGE_SEED', default=42, cast=int)
LLM_CONTEXT_CHARS = config('INTENT_FORGE_CONTEXT_CHARS', default=8000, cast=int)
REAL_SHELL_TIMEOUT = config('INTENT_FORGE_SHELL_TIMEOUT', default=30.0, cast=float)

# Logging
LOG_LEVEL = config('INTENT_FORGE_LOG_LEVEL', default='INFO')

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
            'stream': 'ext://sys.stderr',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
    'loggers': {
        'urllib3': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
    },
}
