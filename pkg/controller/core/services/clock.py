"""
Часы, внедряемые в шлюз LLM, интерпретатор и окружение.

MonotonicClock - реальное время (live-режим), VirtualClock - виртуальное
время для воспроизведения фикстур: sleep() и задержки стрима только
сдвигают счётчик, ничего не ждут.
"""

import time
from abc import ABC, abstractmethod


class Clock(ABC):
    """Источник времени в секундах"""

    @abstractmethod
    def now(self) -> float:
        pass

    @abstractmethod
    def sleep(self, seconds: float) -> None:
        pass

    @property
    def is_virtual(self) -> bool:
        return False


class MonotonicClock(Clock):
    """Системные монотонные часы (time.perf_counter)"""

    def now(self) -> float:
        return time.perf_counter()

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)


class VirtualClock(Clock):
    """Детерминированные часы: время движется только явно"""

    def __init__(self, start: float = 0.0):
        self._now = float(start)

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> float:
        if seconds < 0:
            raise ValueError(f"cannot move a clock backwards by {seconds}")
        self._now += seconds
        return self._now

    def advance_to(self, timestamp: float) -> float:
        # Never moves backwards
        if timestamp > self._now:
            self._now = timestamp
        return self._now

    def sleep(self, seconds: float) -> None:
        self.advance(max(0.0, float(seconds)))

    @property
    def is_virtual(self) -> bool:
        return True

    def __repr__(self) -> str:
        return f"VirtualClock(now={self._now:.3f})"
