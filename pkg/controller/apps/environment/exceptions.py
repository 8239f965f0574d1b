"""
Исключения окружения хоста
"""

from typing import Optional

from apps.functions.exceptions import HostError
from core.exceptions import ConfigurationError


class EnvironmentFixtureError(Exception):
    """Базовое исключение окружения"""
    pass


class EnvironmentConfigError(EnvironmentFixtureError, ConfigurationError):
    """Файл окружения не соответствует схеме"""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Environment fixture {path}: {reason}")


class FixtureMiss(HostError):
    """
    Запрос, для которого в фикстуре нет ответа.

    Отличает пробел фикстуры от ошибки модели при классификации.
    """

    def __init__(self, store: str, key: str, status: Optional[int] = None):
        self.store = store
        self.key = key
        super().__init__(f"no {store} entry for {key!r}", status=status)
