"""
Конфигурация модели и каталог моделей (models.yaml).
"""

import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union

import yaml
from django.conf import settings

from apps.prompts.templates import DEFAULT_ROLE
from core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

MODELS_SCHEMA = 'intent-forge/models@1'
DEFAULT_API_KEY_ENV = 'INTENT_FORGE_API_KEY'


class TransportKind(str, Enum):
    """Способ получения ответа модели"""
    LIVE = 'live'
    FIXTURE = 'fixture'


@dataclass(frozen=True)
class ModelConfig:
    model_name: str
    endpoint_url: str = ''
    temperature: float = 0.0
    role: str = DEFAULT_ROLE
    transport: TransportKind = TransportKind.FIXTURE
    fixture_path: Optional[Path] = None
    request_timeout: float = 60.0
    proprietary: bool = False
    api_key_env: str = DEFAULT_API_KEY_ENV

    def __post_init__(self):
        object.__setattr__(self, 'transport', TransportKind(self.transport))
        if self.fixture_path is not None:
            object.__setattr__(self, 'fixture_path', Path(self.fixture_path))
        self.validate()

    def validate(self) -> None:
        if not self.model_name:
            raise ConfigurationError("model_name is required")
        if not 0.0 <= float(self.temperature) <= 2.0:
            raise ConfigurationError(f"{self.model_name}: temperature {self.temperature} outside [0, 2]")
        if not float(self.request_timeout) > 0:
            raise ConfigurationError(f"{self.model_name}: request_timeout must be > 0")
        if self.transport == TransportKind.FIXTURE and self.fixture_path is None:
            raise ConfigurationError(f"{self.model_name}: fixture transport requires a fixture path")
        if self.transport == TransportKind.LIVE and not self.endpoint_url:
            raise ConfigurationError(f"{self.model_name}: live transport requires an endpoint URL")

    def with_fixtures(self, path: Union[str, Path]) -> 'ModelConfig':
        return replace(self, transport=TransportKind.FIXTURE, fixture_path=Path(path))

    def with_live(self, endpoint_url: Optional[str] = None) -> 'ModelConfig':
        return replace(self, transport=TransportKind.LIVE, endpoint_url=endpoint_url or self.endpoint_url)


def mask_secret(secret: str) -> str:
    """Первые 5 символов ключа и ***"""
    if not secret:
        return '<unset>'
    return f"{secret[:5]}***"


def load_model_catalog(path: Union[str, Path], fixture_path: Optional[Union[str, Path]] = None,
                       live: bool = False, endpoint_url: Optional[str] = None) -> List[ModelConfig]:
    """
    Загрузить каталог моделей.

    По умолчанию модели настроены на фикстуры (fixture_path), при live=True -
    на живой endpoint из каталога или из аргумента.
    """
    path = Path(path)
    try:
        with path.open(encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigurationError(f"Cannot read model catalog {path}: {exc}") from exc

    if data.get('schema') != MODELS_SCHEMA:
        raise ConfigurationError(f"{path}: expected schema {MODELS_SCHEMA!r}, got {data.get('schema')!r}")

    defaults = data.get('defaults') or {}
    models = []
    for item in data.get('models') or []:
        merged = {**defaults, **item}
        models.append(ModelConfig(
            model_name=str(merged['name']),
            endpoint_url=endpoint_url or str(merged.get('endpoint_url', '')),
            temperature=float(merged.get('temperature', 0.0)),
            role=str(merged.get('role', DEFAULT_ROLE)),
            transport=TransportKind.LIVE if live else TransportKind.FIXTURE,
            fixture_path=None if live else Path(fixture_path or merged.get('fixture_path') or settings.BENCHMARK_FIXTURES),
            request_timeout=float(merged.get('request_timeout', 60.0)),
            proprietary=bool(merged.get('proprietary', False)),
            api_key_env=str(merged.get('api_key_env', DEFAULT_API_KEY_ENV)),
        ))

    names = [model.model_name for model in models]
    if len(names) != len(set(names)):
        raise ConfigurationError(f"{path}: duplicate model names")
    logger.info(f"Loaded {len(models)} models from {path.name}")
    return models
