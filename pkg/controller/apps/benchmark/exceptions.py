"""
Исключения бенчмарка
"""

from core.exceptions import ConfigurationError


class BenchmarkError(Exception):
    """Базовое исключение бенчмарка"""
    pass


class CriteriaError(BenchmarkError, ConfigurationError):
    """Файл критериев не соответствует схеме"""

    def __init__(self, path, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Criteria {path}: {reason}")


class UnknownFormat(BenchmarkError, ConfigurationError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown report format {name!r}")


class UnknownProbe(BenchmarkError, ConfigurationError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown environment probe {name!r}")


class UnknownMatcher(BenchmarkError, ConfigurationError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown argument matcher {name!r}")


class RecordsError(BenchmarkError, ConfigurationError):
    """Сохранённый отчёт не читается"""

    def __init__(self, path, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Records file {path}: {reason}")
