"""
Strategy Pattern - реестр взаимозаменяемых стратегий

Используется для форматов отчёта бенчмарка (markdown, csv, plot-data, json)
и для сопоставителей аргументов в критериях успеха.
Позволяет выбирать алгоритм по имени из конфигурации.
"""

from typing import Callable, Dict, Generic, List, TypeVar

T = TypeVar('T')


class StrategyRegistry(Generic[T]):
    """
    Реестр стратегий: имя -> реализация

    Пример:
        renderers = StrategyRegistry('report format', UnknownFormat)

        @renderers.register('csv')
        class CsvRenderer(ReportRenderer): ...
    """

    def __init__(self, kind: str, unknown: Callable[[str], Exception] = KeyError):
        self.kind = kind
        self._unknown = unknown
        self._strategies: Dict[str, T] = {}

    def register(self, name: str) -> Callable[[T], T]:
        """Декоратор регистрации стратегии под именем"""
        def decorator(strategy: T) -> T:
            if name in self._strategies:
                raise ValueError(f"{self.kind} {name!r} is already registered")
            self._strategies[name] = strategy
            return strategy
        return decorator

    def get(self, name: str) -> T:
        """Получить стратегию по имени"""
        try:
            return self._strategies[name]
        except KeyError:
            raise self._unknown(name) from None

    def names(self) -> List[str]:
        return list(self._strategies)

    def __contains__(self, name: object) -> bool:
        return name in self._strategies
