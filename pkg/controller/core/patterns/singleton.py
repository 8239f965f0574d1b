"""
Singleton Pattern - CacheManager

Процессный кеш для тяжёлых read-only объектов (загруженные файлы фикстур).
Гарантирует, что существует только один экземпляр менеджера кеша,
и что каждый ключ создаётся ровно один раз даже при параллельных запусках.
"""

import threading
from typing import Any, Callable, Dict, Optional


class CacheManager:
    """
    Потокобезопасный Singleton для кеширования загруженных фикстур
    """
    _instance: Optional['CacheManager'] = None
    _lock = threading.Lock()

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                # Двойная проверка для потокобезопасности
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
                    cls._instance._initialized = False
        return cls._instance

    def __init__(self):
        if self._initialized:
            return

        self._initialized = True
        self._cache_prefix = 'intent-forge:'
        self._store: Dict[str, Any] = {}
        self._store_lock = threading.Lock()

    def get(self, key: str) -> Any:
        """Получить значение из кеша"""
        return self._store.get(f"{self._cache_prefix}{key}")

    def set(self, key: str, value: Any) -> None:
        """Установить значение в кеш"""
        with self._store_lock:
            self._store[f"{self._cache_prefix}{key}"] = value

    def delete(self, key: str) -> None:
        """Удалить значение из кеша"""
        with self._store_lock:
            self._store.pop(f"{self._cache_prefix}{key}", None)

    def get_or_create(self, key: str, factory: Callable[[], Any]) -> Any:
        """Вернуть значение по ключу, создав его фабрикой при первом обращении"""
        full_key = f"{self._cache_prefix}{key}"
        with self._store_lock:
            if full_key not in self._store:
                self._store[full_key] = factory()
            return self._store[full_key]

    def clear(self) -> None:
        """Очистить весь кеш"""
        with self._store_lock:
            self._store.clear()


# Глобальный экземпляр менеджера кеша
cache_manager = CacheManager()
