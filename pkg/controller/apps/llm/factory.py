"""
Transport Factory - выбор транспорта по конфигурации модели

Фикстуры загружаются один раз на файл и разделяются всеми запусками
(CacheManager), живой транспорт создаётся на каждый запуск.
"""

import logging
from pathlib import Path

from django.conf import settings

from core.patterns.singleton import cache_manager

from .config import ModelConfig, TransportKind
from .transports import FixtureTransport, LiveTransport, Transport, load_fixture_transport

logger = logging.getLogger(__name__)


def get_fixture_transport(path) -> FixtureTransport:
    resolved = Path(path).resolve()
    return cache_manager.get_or_create(f"fixtures:{resolved}", lambda: load_fixture_transport(resolved))


def get_transport(config: ModelConfig) -> Transport:
    """
    Фабричный метод для получения транспорта

    Логика выбора:
    1. transport = fixture -> FixtureTransport (кешируется по пути файла)
    2. transport = live -> LiveTransport (нужен ключ API)
    """
    if config.transport == TransportKind.FIXTURE:
        logger.debug(f"🎭 Using fixtures {config.fixture_path} for {config.model_name}")
        return get_fixture_transport(config.fixture_path)

    logger.debug(f"🌐 Using live endpoint for {config.model_name}")
    return LiveTransport(config, retry_backoff=settings.LLM_RETRY_BACKOFF)
