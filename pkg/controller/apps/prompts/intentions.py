"""
Намерения пользователя и набор намерений бенчмарка.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Union

import yaml

from core.exceptions import ConfigurationError

from .exceptions import IntentionNotFound

logger = logging.getLogger(__name__)

INTENTIONS_SCHEMA = 'intent-forge/intentions@1'


@dataclass(frozen=True)
class Intention:
    """Намерение: небольшой целочисленный id и текст на естественном языке"""
    id: int
    text: str

    def __post_init__(self):
        if not isinstance(self.text, str) or not self.text.strip():
            raise ConfigurationError(f"Intention {self.id} has empty text")


def normalize_text(text: str) -> str:
    return ' '.join(text.split()).casefold()


def load_intentions(path: Union[str, Path]) -> List[Intention]:
    """Загрузить набор намерений из YAML"""
    path = Path(path)
    try:
        with path.open(encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigurationError(f"Cannot read intentions file {path}: {exc}") from exc

    if data.get('schema') != INTENTIONS_SCHEMA:
        raise ConfigurationError(f"{path}: expected schema {INTENTIONS_SCHEMA!r}, got {data.get('schema')!r}")

    suite = []
    seen = set()
    for item in data.get('intentions') or []:
        intention = Intention(id=int(item['id']), text=str(item['text']))
        if intention.id in seen:
            raise ConfigurationError(f"{path}: duplicate intention id {intention.id}")
        seen.add(intention.id)
        suite.append(intention)

    logger.info(f"Loaded {len(suite)} intentions from {path.name}")
    return suite


def match_intention(text: str, suite: Iterable[Intention]) -> Optional[Intention]:
    """Найти намерение набора с тем же (нормализованным) текстом"""
    wanted = normalize_text(text)
    for intention in suite:
        if normalize_text(intention.text) == wanted:
            return intention
    return None


def find_intention(suite: Iterable[Intention], intention_id: int) -> Intention:
    for intention in suite:
        if intention.id == intention_id:
            return intention
    raise IntentionNotFound(intention_id)
