"""
Исключения сборки промпта
"""

from core.exceptions import ConfigurationError


class PromptError(Exception):
    """Базовое исключение сборки промпта"""
    pass


class EmptyTable(PromptError, ConfigurationError):
    """Каталог без функций: промпт без вызываемой поверхности бессмыслен"""

    def __init__(self):
        super().__init__("Function table is empty: nothing to document for the model")


class IntentionNotFound(PromptError, ConfigurationError):
    def __init__(self, query):
        self.query = query
        super().__init__(f"No intention matches {query!r}")
