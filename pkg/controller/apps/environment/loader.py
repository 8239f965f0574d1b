"""
Загрузка фикстуры окружения и фабрика окружений.

Schema `intent-forge/environment@1`:

    schema: intent-forge/environment@1
    seed: 42
    temperature: 21
    llm_context_chars: 8000
    contacts: [{id: 1, display: Anna Schmidt, email: anna@example.org}]
    files: [{path: files/notes.txt, content: "...", tags: [audio]}]
    answers: ["42"]
    web: [{url: ..., status: 200, body: "...", repeat: 40, headers: {}}]
    subqueries: [{text: "...", answer: "..."}, {pattern: "...", answer: "..."}]
    shell: [{command: ls, output: "..."}, {pattern: "ssh .*", output: "...", status: 0}]
"""

import logging
from collections import deque
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from django.conf import settings

from core.patterns.singleton import cache_manager
from core.services.clock import VirtualClock

from .environment import (
    Contact,
    HostEnvironment,
    ShellEntry,
    SubqueryEntry,
    VirtualFile,
    VirtualFileSystem,
    WebResponse,
)
from .exceptions import EnvironmentConfigError

logger = logging.getLogger(__name__)

ENVIRONMENT_SCHEMA = 'intent-forge/environment@1'


@dataclass(frozen=True)
class EnvironmentConfig:
    """Неизменяемое описание окружения; из него строятся свежие экземпляры"""
    seed: int = 42
    temperature: int = 21
    llm_context_chars: int = 8000
    contacts: Tuple[Contact, ...] = ()
    files: Tuple[VirtualFile, ...] = ()
    answers: Tuple[str, ...] = ()
    web: Tuple[Tuple[str, WebResponse], ...] = ()
    subqueries: Tuple[SubqueryEntry, ...] = ()
    shell: Tuple[ShellEntry, ...] = ()
    source: Optional[str] = None


def _require(condition: bool, path: Path, reason: str) -> None:
    if not condition:
        raise EnvironmentConfigError(str(path), reason)


def _contacts(path: Path, items: List[Dict[str, Any]]) -> Tuple[Contact, ...]:
    contacts = []
    for index, item in enumerate(items):
        _require(isinstance(item, dict) and {'id', 'display', 'email'} <= set(item),
                 path, f"contacts[{index}] needs id, display and email")
        contacts.append(Contact(int(item['id']), str(item['display']), str(item['email'])))
    ids = [contact.id for contact in contacts]
    _require(len(ids) == len(set(ids)), path, "duplicate contact id")
    return tuple(contacts)


def _files(path: Path, items: List[Any]) -> Tuple[VirtualFile, ...]:
    files = []
    for index, item in enumerate(items):
        if isinstance(item, str):
            item = {'path': item}
        _require(isinstance(item, dict) and item.get('path'), path, f"files[{index}] needs a path")
        content = item.get('content', '')
        files.append(VirtualFile(
            path=str(item['path']),
            content=content.encode('utf-8') if isinstance(content, str) else bytes(content),
            tags=frozenset(item.get('tags') or ()),
        ))
    return tuple(files)


def _web(path: Path, items: List[Dict[str, Any]]) -> Tuple[Tuple[str, WebResponse], ...]:
    entries = []
    for index, item in enumerate(items):
        _require(isinstance(item, dict) and item.get('url'), path, f"web[{index}] needs a url")
        repeat = int(item.get('repeat', 1))
        _require(repeat >= 1, path, f"web[{index}].repeat must be at least 1")
        headers = item.get('headers') or {}
        entries.append((str(item['url']).strip(), WebResponse(
            status=int(item.get('status', 200)),
            body=str(item.get('body', '')) * repeat,
            headers=tuple(sorted((str(k), str(v)) for k, v in headers.items())),
            reason=str(item.get('reason', 'OK')),
        )))
    return tuple(entries)


def _keyed(path: Path, section: str, items: List[Dict[str, Any]], key: str) -> List[Dict[str, Any]]:
    for index, item in enumerate(items):
        _require(isinstance(item, dict), path, f"{section}[{index}] must be a mapping")
        _require((key in item) != ('pattern' in item), path,
                 f"{section}[{index}] needs exactly one of '{key}' or 'pattern'")
    return items


def parse_environment_config(data: Dict[str, Any], path: Union[str, Path] = '<memory>') -> EnvironmentConfig:
    path = Path(path)
    _require(isinstance(data, dict), path, "top level must be a mapping")
    _require(data.get('schema') == ENVIRONMENT_SCHEMA, path,
             f"expected schema {ENVIRONMENT_SCHEMA!r}, got {data.get('schema')!r}")

    subqueries = tuple(
        SubqueryEntry(answer=str(item.get('answer', '')), text=item.get('text'), pattern=item.get('pattern'))
        for item in _keyed(path, 'subqueries', data.get('subqueries') or [], 'text')
    )
    shell = tuple(
        ShellEntry(output=str(item.get('output', '')), command=item.get('command'),
                   pattern=item.get('pattern'), status=int(item.get('status', 0)))
        for item in _keyed(path, 'shell', data.get('shell') or [], 'command')
    )
    return EnvironmentConfig(
        seed=int(data.get('seed', settings.DEFAULT_SEED)),
        temperature=int(data.get('temperature', 21)),
        llm_context_chars=int(data.get('llm_context_chars', settings.LLM_CONTEXT_CHARS)),
        contacts=_contacts(path, data.get('contacts') or []),
        files=_files(path, data.get('files') or []),
        answers=tuple(str(answer) for answer in data.get('answers') or []),
        web=_web(path, data.get('web') or []),
        subqueries=subqueries,
        shell=shell,
        source=str(path),
    )


def load_environment_config(path: Union[str, Path]) -> EnvironmentConfig:
    """Загрузить фикстуру окружения (кешируется по пути файла)"""
    resolved = Path(path).resolve()

    def _load() -> EnvironmentConfig:
        try:
            with resolved.open(encoding='utf-8') as f:
                data = yaml.safe_load(f)
        except OSError as exc:
            raise EnvironmentConfigError(str(resolved), str(exc)) from exc
        except yaml.YAMLError as exc:
            raise EnvironmentConfigError(str(resolved), f"YAML error: {exc}") from exc
        config = parse_environment_config(data, resolved)
        logger.info(f"Loaded environment {resolved.name}: {len(config.files)} files, "
                    f"{len(config.contacts)} contacts")
        return config

    return cache_manager.get_or_create(f"environment:{resolved}", _load)


class EnvironmentFactory:
    """
    Строит независимые HostEnvironment из одной конфигурации.

    Два окружения из одной конфигурации наблюдаемо неразличимы.
    """

    def __init__(self, config: EnvironmentConfig):
        self.config = config

    def build(self, **overrides) -> HostEnvironment:
        config = self.config
        if 'seed' in overrides:
            config = replace(config, seed=overrides.pop('seed'))
        environment = HostEnvironment(
            vfs=VirtualFileSystem(config.files),
            contacts=list(config.contacts),
            rng_seed=config.seed,
            clock=overrides.pop('clock', None) or VirtualClock(),
            temperature_reading=config.temperature,
            answer_script=deque(config.answers),
            web_store=dict(config.web),
            subqueries=list(config.subqueries),
            shell_script=list(config.shell),
            llm_context_chars=config.llm_context_chars,
            shell_timeout=settings.REAL_SHELL_TIMEOUT,
        )
        for name, value in overrides.items():
            if not hasattr(environment, name):
                raise TypeError(f"unknown environment override {name!r}")
            setattr(environment, name, value)
        return environment
