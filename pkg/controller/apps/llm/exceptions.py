"""
Исключения шлюза LLM
"""

from typing import Optional

from core.exceptions import ConfigurationError


class GatewayError(Exception):
    """Базовое исключение шлюза LLM"""
    pass


class TransportError(GatewayError):
    """Сетевая ошибка или HTTP-ошибка; status - код ответа, если он был"""

    def __init__(self, message: str, status: Optional[int] = None):
        self.status = status
        super().__init__(message if status is None else f"HTTP {status}: {message}")


class EmptyStream(GatewayError):
    def __init__(self, model_name: str = ''):
        self.model_name = model_name
        super().__init__(f"Stream from {model_name or 'model'} closed without any chunk")


class Timeout(GatewayError):
    def __init__(self, seconds: float):
        self.seconds = seconds
        super().__init__(f"Response not completed within {seconds:g} s")


class FixtureParseError(GatewayError, ConfigurationError):
    def __init__(self, path, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Invalid fixture file {path}: {reason}")


class MissingTranscript(GatewayError, ConfigurationError):
    """В файле фикстур нет пары (модель, намерение)"""

    def __init__(self, model_name: str, intention_id):
        self.model_name = model_name
        self.intention_id = intention_id
        super().__init__(f"No transcript for model {model_name!r}, intention {intention_id}")
