"""
Test settings: quiet logs, no credentials, default sandbox limits.
"""

from .base import *

LLM_API_KEY = ''
LLM_RETRY_BACKOFF = 0.0

WORKFLOW_MAX_STEPS = 100_000
WORKFLOW_MAX_WALL_TIME = 30.0

LOG_LEVEL = 'WARNING'
LOGGING['root']['level'] = LOG_LEVEL
