"""
Observer Pattern - наблюдатели за ходом выполнения workflow

Интерпретатор является субъектом: каждое событие трассировки
(Begin, Call, Output, Error, End) рассылается подписанным наблюдателям.
Запись трассы и вывод в консоль - два независимых наблюдателя.
"""

from abc import ABC, abstractmethod
from typing import Any, List


# Subject (Наблюдаемый объект)
class Subject:
    """
    Субъект, на который могут подписаться наблюдатели
    """

    def __init__(self):
        self._observers: List['Observer'] = []

    def attach(self, observer: 'Observer') -> None:
        """Прикрепить наблюдателя"""
        if observer not in self._observers:
            self._observers.append(observer)

    def detach(self, observer: 'Observer') -> None:
        """Открепить наблюдателя"""
        if observer in self._observers:
            self._observers.remove(observer)

    @property
    def observers(self) -> List['Observer']:
        return list(self._observers)

    def notify(self, event: str, data: Any) -> None:
        """Уведомить всех наблюдателей о событии"""
        for observer in self._observers:
            observer.update(event, data)


# Интерфейс Observer (Наблюдатель)
class Observer(ABC):
    """
    Интерфейс наблюдателя
    """

    @abstractmethod
    def update(self, event: str, data: Any) -> None:
        """
        Получить обновление от субъекта

        Args:
            event: Название события (begin, call, output, error, end)
            data: Данные события
        """
        pass
