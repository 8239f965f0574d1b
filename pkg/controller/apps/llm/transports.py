"""
Транспорты шлюза LLM (Strategy Pattern).

FixtureTransport воспроизводит записанные транскрипты по виртуальным часам,
LiveTransport обращается к OpenAI-совместимому endpoint по SSE.
"""

import json
import logging
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Union

import requests
import yaml
from decouple import config as env_config
from urllib3.exceptions import ReadTimeoutError

from core.exceptions import ConfigurationError
from core.services.clock import Clock

from .config import ModelConfig, mask_secret
from .exceptions import FixtureParseError, MissingTranscript, Timeout, TransportError

logger = logging.getLogger(__name__)

TRANSCRIPTS_SCHEMA = 'intent-forge/transcripts@1'
TRANSIENT_STATUSES = {429, 500, 502, 503, 504}


class Transport(ABC):
    """
    Абстрактный транспорт: stream() отдаёт текстовые чанки ответа.

    Время фиксирует вызывающий по тем же часам, что переданы сюда.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self.requests_sent = 0

    def _count_request(self) -> None:
        with self._lock:
            self.requests_sent += 1

    @abstractmethod
    def stream(self, bundle, config: ModelConfig, clock: Clock) -> Iterator[str]:
        pass

    @property
    def is_network(self) -> bool:
        return False


# ============================================================================
# Fixture transport
# ============================================================================

@dataclass(frozen=True)
class TranscriptChunk:
    offset_ms: float
    text: str


@dataclass(frozen=True)
class Transcript:
    model: str
    intention_id: int
    chunks: Tuple[TranscriptChunk, ...]
    end_offset_ms: Optional[float] = None
    annotations: Dict[str, Any] = field(default_factory=dict, hash=False, compare=False)

    @property
    def full_text(self) -> str:
        return ''.join(chunk.text for chunk in self.chunks)

    @property
    def close_offset_ms(self) -> float:
        if self.end_offset_ms is not None:
            return self.end_offset_ms
        return self.chunks[-1].offset_ms if self.chunks else 0.0


class FixtureTransport(Transport):
    """
    Воспроизведение транскриптов, ключ - (model, intention_id).

    Read-only после загрузки, безопасен для совместного использования.
    Сетевых вызовов нет: requests_served считает обслуженные запросы.
    """

    def __init__(self, transcripts: Dict[Tuple[str, int], Transcript],
                 label: str = 'reconstruction', source: Optional[Path] = None):
        super().__init__()
        self._transcripts = dict(transcripts)
        self.label = label
        self.source = source

    @property
    def requests_served(self) -> int:
        return self.requests_sent

    def __len__(self) -> int:
        return len(self._transcripts)

    def pairs(self) -> List[Tuple[str, int]]:
        return list(self._transcripts)

    def models(self) -> List[str]:
        seen: List[str] = []
        for model, _ in self._transcripts:
            if model not in seen:
                seen.append(model)
        return seen

    def transcript(self, model_name: str, intention_id: int) -> Transcript:
        try:
            return self._transcripts[(model_name, intention_id)]
        except KeyError:
            raise MissingTranscript(model_name, intention_id) from None

    def stream(self, bundle, config: ModelConfig, clock: Clock) -> Iterator[str]:
        transcript = self.transcript(config.model_name, bundle.intention_id)
        self._count_request()
        start = clock.now()
        logger.debug(f"Replaying {config.model_name}/{bundle.intention_id} ({len(transcript.chunks)} chunks)")
        return self._replay(transcript, clock, start)

    @staticmethod
    def _replay(transcript: Transcript, clock: Clock, start: float) -> Iterator[str]:
        for chunk in transcript.chunks:
            _wait_until(clock, start + chunk.offset_ms / 1000.0)
            yield chunk.text
        _wait_until(clock, start + transcript.close_offset_ms / 1000.0)


def _wait_until(clock: Clock, timestamp: float) -> None:
    if hasattr(clock, 'advance_to'):
        clock.advance_to(timestamp)
    else:
        clock.sleep(timestamp - clock.now())


def _parse_transcript(path: Path, index: int, item: Any) -> Transcript:
    where = f"transcripts[{index}]"
    if not isinstance(item, dict):
        raise FixtureParseError(path, f"{where} is not a mapping")
    model = item.get('model')
    if not isinstance(model, str) or not model:
        raise FixtureParseError(path, f"{where}.model must be a non-empty string")
    intention_id = item.get('intention_id')
    if not isinstance(intention_id, int) or isinstance(intention_id, bool):
        raise FixtureParseError(path, f"{where}.intention_id must be an integer")

    chunks = []
    previous = 0.0
    for position, raw in enumerate(item.get('chunks') or []):
        if not isinstance(raw, dict) or 'offset_ms' not in raw or 'text' not in raw:
            raise FixtureParseError(path, f"{where}.chunks[{position}] needs offset_ms and text")
        offset = raw['offset_ms']
        if not isinstance(offset, (int, float)) or isinstance(offset, bool) or offset < 0:
            raise FixtureParseError(path, f"{where}.chunks[{position}].offset_ms must be a number >= 0")
        if offset < previous:
            raise FixtureParseError(path, f"{where}.chunks[{position}] goes back in time")
        if not isinstance(raw['text'], str):
            raise FixtureParseError(path, f"{where}.chunks[{position}].text must be a string")
        previous = float(offset)
        chunks.append(TranscriptChunk(float(offset), raw['text']))

    end_offset = item.get('end_offset_ms')
    if end_offset is not None and (not isinstance(end_offset, (int, float)) or end_offset < previous):
        raise FixtureParseError(path, f"{where}.end_offset_ms must not precede the last chunk")

    annotations = item.get('annotations') or {}
    if not isinstance(annotations, dict):
        raise FixtureParseError(path, f"{where}.annotations must be a mapping")

    return Transcript(
        model=model,
        intention_id=intention_id,
        chunks=tuple(chunks),
        end_offset_ms=None if end_offset is None else float(end_offset),
        annotations=dict(annotations),
    )


def load_fixture_transport(path: Union[str, Path]) -> FixtureTransport:
    """Загрузить файл транскриптов (schema intent-forge/transcripts@1)"""
    path = Path(path)
    try:
        with path.open(encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except OSError as exc:
        raise FixtureParseError(path, str(exc)) from exc
    except yaml.YAMLError as exc:
        raise FixtureParseError(path, f"YAML error: {exc}") from exc

    if not isinstance(data, dict):
        raise FixtureParseError(path, "top level must be a mapping")
    if data.get('schema') != TRANSCRIPTS_SCHEMA:
        raise FixtureParseError(path, f"expected schema {TRANSCRIPTS_SCHEMA!r}, got {data.get('schema')!r}")
    items = data.get('transcripts')
    if not isinstance(items, list):
        raise FixtureParseError(path, "'transcripts' must be a list")

    transcripts: Dict[Tuple[str, int], Transcript] = {}
    for index, item in enumerate(items):
        transcript = _parse_transcript(path, index, item)
        key = (transcript.model, transcript.intention_id)
        if key in transcripts:
            raise FixtureParseError(path, f"duplicate transcript for {key[0]}/{key[1]}")
        transcripts[key] = transcript

    logger.info(f"Loaded {len(transcripts)} transcripts from {path.name}")
    return FixtureTransport(transcripts, label=str(data.get('label', 'reconstruction')), source=path)


# ============================================================================
# Live transport
# ============================================================================

class LiveTransport(Transport):
    """
    OpenAI-совместимый POST <endpoint>/v1/chat/completions со stream=True.

    Одна повторная попытка при временной ошибке до первого чанка.
    """

    def __init__(self, config: ModelConfig, session: Optional[requests.Session] = None,
                 retry_backoff: float = 1.0):
        super().__init__()
        self.api_key = env_config(config.api_key_env, default='')
        if not self.api_key:
            raise ConfigurationError(f"Live mode requires the {config.api_key_env} environment variable")
        self.session = session or requests.Session()
        self.retry_backoff = retry_backoff
        logger.info(f"Live transport for {config.model_name} at {config.endpoint_url} (key {mask_secret(self.api_key)})")

    @property
    def is_network(self) -> bool:
        return True

    @staticmethod
    def completions_url(endpoint_url: str) -> str:
        base = endpoint_url.rstrip('/')
        if base.endswith('/v1'):
            base = base[:-3]
        return f"{base}/v1/chat/completions"

    def _payload(self, bundle, config: ModelConfig) -> Dict[str, Any]:
        return {
            'model': config.model_name,
            'messages': bundle.to_messages(),
            'temperature': bundle.model_params.temperature,
            'stream': True,
        }

    def _open(self, bundle, config: ModelConfig) -> requests.Response:
        headers = {
            'Authorization': f'Bearer {self.api_key}',
            'Content-Type': 'application/json',
            'Accept': 'text/event-stream',
        }
        self._count_request()
        try:
            response = self.session.post(
                self.completions_url(config.endpoint_url),
                headers=headers,
                data=json.dumps(self._payload(bundle, config)),
                stream=True,
                timeout=config.request_timeout,
            )
        except requests.exceptions.Timeout as exc:
            raise Timeout(config.request_timeout) from exc
        except requests.exceptions.RequestException as exc:
            raise TransportError(str(exc)) from exc

        if response.status_code >= 400:
            text = response.text[:200] if response.text else response.reason
            response.close()
            raise TransportError(text or 'error', status=response.status_code)
        # text/event-stream without charset defaults to ISO-8859-1 in requests
        response.encoding = 'utf-8'
        return response

    def _open_with_retry(self, bundle, config: ModelConfig, clock: Clock) -> requests.Response:
        try:
            return self._open(bundle, config)
        except (TransportError, Timeout) as exc:
            status = getattr(exc, 'status', None)
            if status is not None and status not in TRANSIENT_STATUSES:
                raise
            logger.warning(f"⚠️  {config.model_name}: transient failure ({exc}), retrying once")
            clock.sleep(self.retry_backoff)
            return self._open(bundle, config)

    def stream(self, bundle, config: ModelConfig, clock: Clock) -> Iterator[str]:
        response = self._open_with_retry(bundle, config, clock)
        return self._read_events(response, config.request_timeout)

    @staticmethod
    def _read_events(response: requests.Response, timeout: float) -> Iterator[str]:
        try:
            for line in response.iter_lines(decode_unicode=True):
                if not line or not line.startswith('data:'):
                    continue
                data = line[len('data:'):].strip()
                if data == '[DONE]':
                    break
                try:
                    payload = json.loads(data)
                except json.JSONDecodeError:
                    logger.debug(f"Skipping malformed SSE line: {data[:80]}")
                    continue
                for choice in payload.get('choices') or []:
                    delta = choice.get('delta') or {}
                    text = delta.get('content') or choice.get('text') or ''
                    if text:
                        yield text
        except requests.exceptions.Timeout as exc:
            raise Timeout(timeout) from exc
        except requests.exceptions.ConnectionError as exc:
            if any(isinstance(arg, ReadTimeoutError) for arg in exc.args):
                raise Timeout(timeout) from exc
            raise TransportError(str(exc)) from exc
        except requests.exceptions.RequestException as exc:
            raise TransportError(str(exc)) from exc
        finally:
            response.close()
