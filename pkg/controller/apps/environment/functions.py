"""
Стандартный каталог: 16 функций хоста и их реализации над HostEnvironment.

Сигнатуры - ровно те строки, что видит модель в промпте.
"""

import logging
import subprocess
from dataclasses import replace
from typing import Any, Callable, Dict, List, Optional, Tuple

import requests

from apps.functions.exceptions import DuplicateName, HostError, TableFrozen
from apps.functions.signatures import FunctionKind, parse_signature
from apps.functions.table import FunctionTable

from .environment import HostEnvironment, SentEmail
from .exceptions import FixtureMiss

logger = logging.getLogger(__name__)

STANDARD_SIGNATURES: Tuple[str, ...] = (
    'function find_contact_id(expression: String): Integer|null',
    'function find_contact_email(contact_id: Integer): String|null',
    'function ask_question(question: String): String',
    'function send_email(email: String, subject: String, text: String, attachment_paths: Collection<String>): void',
    'function get_temperature(): Integer',
    'function find_files(expression: String): Collection<String>',
    'function print(text: String): void',
    'function shell(command: String): String',
    'function sleep(seconds: Integer): void',
    'function find_all_audio_files(): Collection<String>',
    'function generate_random_number(inclusiveStart: Integer, exclusiveEnd: Integer): Integer',
    'function play_audio_file(file_path: String): void',
    'function find_file(expression: String): String|null',
    'function stop_audio_player(): void',
    'function query_llm(query: String): String',
    'function http_get_request(url: String, headers: Dictionary<String, String>): String',
)


# ==================== КОНТАКТЫ ====================

def find_contact_id(env: HostEnvironment, expression: str) -> Optional[int]:
    found = env.find_contacts(expression)
    return found[0].id if found else None


def find_contact_email(env: HostEnvironment, contact_id: int) -> Optional[str]:
    contact = env.contact_by_id(contact_id)
    return contact.email if contact else None


def send_email(env: HostEnvironment, email: str, subject: str, text: str, attachment_paths: List[str]) -> None:
    attachments = []
    for path in attachment_paths:
        resolved = env.vfs.resolve(path)
        if resolved is None:
            raise HostError(f"attachment not found: {path}")
        attachments.append(resolved)
    env.sent_emails.append(SentEmail(email, subject, text, tuple(attachments)))
    env.record_effect('send_email')
    logger.info(f"📧 Captured email to {email} with {len(attachments)} attachment(s)")


# ==================== ПОЛЬЗОВАТЕЛЬ ====================

def ask_question(env: HostEnvironment, question: str) -> str:
    env.record_effect('ask_question')
    if env.answer_script:
        return env.answer_script.popleft()
    if env.interactive and env.input_fn is not None:
        return env.input_fn(f"{question} ")
    logger.warning(f"⚠️ No scripted answer left for: {question!r}")
    raise FixtureMiss('answer', question)


def print_text(env: HostEnvironment, text: str) -> None:
    env.printed.append(text)
    env.record_effect('print')
    if env.output_fn is not None:
        env.output_fn(text)


# ==================== СИСТЕМА ====================

def get_temperature(env: HostEnvironment) -> int:
    return env.temperature_reading


def sleep(env: HostEnvironment, seconds: int) -> None:
    if seconds < 0:
        raise HostError(f"sleep length must be non-negative, got {seconds}")
    env.record_effect('sleep')
    env.clock.sleep(seconds)


def generate_random_number(env: HostEnvironment, inclusiveStart: int, exclusiveEnd: int) -> int:
    if exclusiveEnd <= inclusiveStart:
        raise HostError(f"empty range [{inclusiveStart}, {exclusiveEnd})")
    return env.rng.randrange(inclusiveStart, exclusiveEnd)


def shell(env: HostEnvironment, command: str) -> str:
    env.record_effect('shell')
    if env.allow_real_shell:
        return _run_real_shell(env, command)

    entry = env.shell_entry(command)
    if entry is None:
        logger.warning(f"⚠️ Unscripted shell command: {command!r}")
        raise HostError(f"command not found: {command.strip()}", status=127)
    if entry.status:
        raise HostError(entry.output or f"command exited with {entry.status}", status=entry.status)
    return entry.output


def _run_real_shell(env: HostEnvironment, command: str) -> str:
    logger.warning(f"⚠️ Running real shell command: {command!r}")
    try:
        completed = subprocess.run(
            command, shell=True, capture_output=True, text=True, timeout=env.shell_timeout,
        )
    except subprocess.TimeoutExpired:
        raise HostError(f"command timed out after {env.shell_timeout}s", status=124) from None
    if completed.returncode != 0:
        raise HostError(completed.stderr.strip() or f"exit status {completed.returncode}",
                        status=completed.returncode)
    return completed.stdout


# ==================== ФАЙЛЫ И АУДИО ====================

def find_files(env: HostEnvironment, expression: str) -> List[str]:
    return env.vfs.find(expression)


def find_file(env: HostEnvironment, expression: str) -> Optional[str]:
    found = env.vfs.find(expression)
    return found[0] if found else None


def find_all_audio_files(env: HostEnvironment) -> List[str]:
    return env.vfs.audio_paths()


def play_audio_file(env: HostEnvironment, file_path: str) -> None:
    resolved = env.vfs.resolve(file_path)
    if resolved is None:
        raise HostError(f"file not found: {file_path}")
    if not env.vfs.get(resolved).is_audio:
        raise HostError(f"not an audio file: {file_path}")
    env.audio_player.play(resolved)
    env.record_effect('play_audio_file')
    logger.info(f"🎵 Playing {resolved}")


def stop_audio_player(env: HostEnvironment) -> None:
    env.audio_player.stop()
    env.record_effect('stop_audio_player')


# ==================== LLM И ВЕБ ====================

def query_llm(env: HostEnvironment, query: str) -> str:
    if len(query) > env.llm_context_chars:
        logger.info(f"🧱 query_llm input of {len(query)} chars exceeds the context window")
        raise HostError('Bad Request', status=400)
    if env.llm_backend is not None:
        return env.llm_backend(query)
    answer = env.subquery_answer(query)
    if answer is None:
        logger.warning(f"⚠️ No recorded answer for query_llm({query[:60]!r})")
        raise FixtureMiss('subquery', query)
    return answer


def http_get_request(env: HostEnvironment, url: str, headers: Dict[str, str]) -> str:
    if env.live_web:
        return _live_get(env, url, headers)
    response = env.web_store.get(url.strip())
    if response is None:
        logger.warning(f"⚠️ URL not in web store: {url}")
        raise FixtureMiss('web', url)
    if response.status >= 400:
        raise HostError(response.reason, status=response.status)
    return response.body


def _live_get(env: HostEnvironment, url: str, headers: Dict[str, str]) -> str:
    try:
        response = requests.get(url, headers=headers, timeout=env.shell_timeout)
    except requests.exceptions.RequestException as exc:
        raise HostError(f"request failed: {exc}") from exc
    if response.status_code >= 400:
        raise HostError(response.reason or 'HTTP error', status=response.status_code)
    return response.text


STANDARD_CALLBACKS: Dict[str, Callable[..., Any]] = {
    'find_contact_id': find_contact_id,
    'find_contact_email': find_contact_email,
    'ask_question': ask_question,
    'send_email': send_email,
    'get_temperature': get_temperature,
    'find_files': find_files,
    'print': print_text,
    'shell': shell,
    'sleep': sleep,
    'find_all_audio_files': find_all_audio_files,
    'generate_random_number': generate_random_number,
    'play_audio_file': play_audio_file,
    'find_file': find_file,
    'stop_audio_player': stop_audio_player,
    'query_llm': query_llm,
    'http_get_request': http_get_request,
}


def _kind_for(name: str, env: Optional[HostEnvironment]) -> FunctionKind:
    if env is None:
        return FunctionKind.STUB
    real = {
        'shell': env.allow_real_shell,
        'query_llm': env.llm_backend is not None,
        'http_get_request': env.live_web,
        'ask_question': env.interactive,
    }
    return FunctionKind.REAL if real.get(name) else FunctionKind.STUB


def install_standard_functions(table: FunctionTable, env: Optional[HostEnvironment] = None) -> FunctionTable:
    """
    Зарегистрировать 16 стандартных функций.

    env определяет, какие функции помечаются как реальные интеграции
    (shell, query_llm, http_get_request, ask_question).

    Raises:
        DuplicateName: таблица уже содержит одну из функций
        TableFrozen: таблица заморожена
    """
    specs = [parse_signature(line) for line in STANDARD_SIGNATURES]
    if table.frozen:
        raise TableFrozen(specs[0].name)
    for spec in specs:
        if spec.name in table:
            raise DuplicateName(spec.name)
    for spec in specs:
        table.register(replace(spec, kind=_kind_for(spec.name, env)), STANDARD_CALLBACKS[spec.name])
    return table


def build_standard_table(env: Optional[HostEnvironment] = None) -> FunctionTable:
    return install_standard_functions(FunctionTable(), env).freeze()
