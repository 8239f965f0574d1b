"""
HostEnvironment - состояние, над которым работают функции хоста.

Всё, что функции читают или меняют, хранится здесь: виртуальная ФС,
контакты, генератор, часы, сценарии ответов, веб-хранилище, подзапросы
к LLM, сценарий shell, аудиоплеер и перехваченные письма.
"""

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import PurePosixPath
from typing import Callable, Deque, Dict, FrozenSet, List, Optional, Tuple

from core.services.clock import Clock, VirtualClock

from .matching import matches, normalize
from .rng import SplitMix64

logger = logging.getLogger(__name__)

AUDIO_EXTENSIONS = frozenset({'.mp3', '.wav', '.ogg', '.flac', '.m4a', '.aac'})
AUDIO_TAG = 'audio'
FILES_ROOT = 'files'


# ==================== ФАЙЛЫ ====================

@dataclass(frozen=True)
class VirtualFile:
    path: str
    content: bytes = b''
    tags: FrozenSet[str] = frozenset()

    @property
    def is_audio(self) -> bool:
        return AUDIO_TAG in self.tags


class VirtualFileSystem:
    """Плоское отображение путь -> файл; пути в формате POSIX"""

    def __init__(self, files: Tuple[VirtualFile, ...] = ()):
        self._files: Dict[str, VirtualFile] = {}
        for virtual_file in files:
            self.add(virtual_file)

    def add(self, virtual_file: VirtualFile) -> None:
        tags = set(virtual_file.tags)
        if PurePosixPath(virtual_file.path).suffix.lower() in AUDIO_EXTENSIONS:
            tags.add(AUDIO_TAG)
        self._files[virtual_file.path] = VirtualFile(virtual_file.path, virtual_file.content, frozenset(tags))

    def paths(self) -> List[str]:
        return sorted(self._files)

    def audio_paths(self) -> List[str]:
        return [path for path in self.paths() if self._files[path].is_audio]

    def get(self, path: str) -> Optional[VirtualFile]:
        return self._files.get(path)

    def resolve(self, path: str) -> Optional[str]:
        """Точный путь или путь относительно files/"""
        candidate = (path or '').strip()
        while candidate.startswith('./'):
            candidate = candidate[2:]
        candidate = candidate.lstrip('/')
        for option in (candidate, f"{FILES_ROOT}/{candidate}"):
            if option in self._files:
                return option
        return None

    def find(self, expression: str) -> List[str]:
        return [path for path in self.paths() if matches(expression, path)]

    def __contains__(self, path: object) -> bool:
        return path in self._files

    def __len__(self) -> int:
        return len(self._files)


# ==================== КОНТАКТЫ И ПИСЬМА ====================

@dataclass(frozen=True)
class Contact:
    id: int
    display: str
    email: str


@dataclass(frozen=True)
class SentEmail:
    """Перехваченное письмо; никуда не отправляется"""
    to: str
    subject: str
    text: str
    attachments: Tuple[str, ...] = ()


@dataclass
class AudioPlayer:
    current: Optional[str] = None
    history: List[str] = field(default_factory=list)
    stop_count: int = 0

    def play(self, path: str) -> None:
        self.current = path
        self.history.append(path)

    def stop(self) -> None:
        self.current = None
        self.stop_count += 1


# ==================== СЦЕНАРИИ ====================

@dataclass(frozen=True)
class WebResponse:
    status: int = 200
    body: str = ''
    headers: Tuple[Tuple[str, str], ...] = ()
    reason: str = 'OK'


@dataclass(frozen=True)
class SubqueryEntry:
    """Ответ на query_llm: по нормализованному тексту или по регулярному выражению"""
    answer: str
    text: Optional[str] = None
    pattern: Optional[str] = None

    def accepts(self, query: str) -> bool:
        if self.text is not None and normalize(self.text) == normalize(query):
            return True
        if self.pattern is not None:
            return re.search(self.pattern, query, re.IGNORECASE | re.DOTALL) is not None
        return False


@dataclass(frozen=True)
class ShellEntry:
    """Ответ на команду shell: точная команда или полное совпадение с pattern"""
    output: str = ''
    command: Optional[str] = None
    pattern: Optional[str] = None
    status: int = 0

    def accepts(self, command: str) -> bool:
        stripped = command.strip()
        if self.command is not None and self.command.strip() == stripped:
            return True
        if self.pattern is not None:
            return re.fullmatch(self.pattern, stripped, re.DOTALL) is not None
        return False


# ==================== ОКРУЖЕНИЕ ====================

@dataclass
class HostEnvironment:
    """
    Состояние одного выполнения workflow.

    Окружение не разделяется между выполнениями: для параллельных
    live-прогонов EnvironmentFactory строит отдельный экземпляр.
    """
    vfs: VirtualFileSystem = field(default_factory=VirtualFileSystem)
    contacts: List[Contact] = field(default_factory=list)
    rng_seed: int = 42
    clock: Clock = field(default_factory=VirtualClock)
    temperature_reading: int = 21
    answer_script: Deque[str] = field(default_factory=deque)
    web_store: Dict[str, WebResponse] = field(default_factory=dict)
    subqueries: List[SubqueryEntry] = field(default_factory=list)
    shell_script: List[ShellEntry] = field(default_factory=list)
    llm_context_chars: int = 8000
    audio_player: AudioPlayer = field(default_factory=AudioPlayer)
    sent_emails: List[SentEmail] = field(default_factory=list)
    printed: List[str] = field(default_factory=list)
    effects: int = 0

    # Live / interactive switches
    interactive: bool = False
    input_fn: Optional[Callable[[str], str]] = None
    output_fn: Optional[Callable[[str], None]] = None
    llm_backend: Optional[Callable[[str], str]] = None
    live_web: bool = False
    allow_real_shell: bool = False
    shell_timeout: float = 30.0

    rng: SplitMix64 = field(init=False, repr=False)

    def __post_init__(self):
        self.answer_script = deque(self.answer_script)
        self.rng = SplitMix64(self.rng_seed)

    def record_effect(self, name: str) -> None:
        self.effects += 1
        logger.debug(f"Effect #{self.effects}: {name}")

    def contact_by_id(self, contact_id: int) -> Optional[Contact]:
        for contact in self.contacts:
            if contact.id == contact_id:
                return contact
        return None

    def find_contacts(self, expression: str) -> List[Contact]:
        return [
            contact for contact in self.contacts
            if matches(expression, contact.display) or matches(expression, contact.email)
        ]

    def shell_entry(self, command: str) -> Optional[ShellEntry]:
        exact = [entry for entry in self.shell_script if entry.command is not None and entry.accepts(command)]
        if exact:
            return exact[0]
        for entry in self.shell_script:
            if entry.accepts(command):
                return entry
        return None

    def subquery_answer(self, query: str) -> Optional[str]:
        exact = [entry for entry in self.subqueries if entry.text is not None and entry.accepts(query)]
        if exact:
            return exact[0].answer
        for entry in self.subqueries:
            if entry.accepts(query):
                return entry.answer
        return None
