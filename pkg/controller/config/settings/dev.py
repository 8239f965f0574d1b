"""
Development settings for the intent-forge controller.
"""

from .base import *

# Подробные логи при разработке
LOG_LEVEL = config('INTENT_FORGE_LOG_LEVEL', default='DEBUG')
LOGGING['root']['level'] = LOG_LEVEL
