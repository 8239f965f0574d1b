"""
Execution traces: events, status and the line-delimited JSON form.

JSONL layout (one object per line, keys sorted, UTF-8):

    {"at": 0.0, "event": "begin", "intention_id": 1, "seq": 0}
    {"args": [5], "at": 0.0, "event": "call", "name": "sleep", "result": null, "seq": 1}
    {"at": 5.0, "event": "end", "seq": 2, "status": "completed"}
    {"event": "summary", "events": 3, "intention_id": 1, "status": "completed", "steps_used": 3}
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from core.patterns.observer import Observer


class TraceEventKind(str, Enum):
    BEGIN = 'begin'
    CALL = 'call'
    OUTPUT = 'output'
    ERROR = 'error'
    END = 'end'


class ExecutionStatus(str, Enum):
    COMPLETED = 'completed'
    RUNTIME_ERROR = 'runtime_error'
    LIMIT_EXCEEDED = 'limit_exceeded'
    PARSE_REJECTED = 'parse_rejected'


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    kind: TraceEventKind
    at: float
    payload: Dict[str, Any] = field(default_factory=dict)

    # Call events
    @property
    def name(self) -> Optional[str]:
        return self.payload.get('name')

    @property
    def args(self) -> List[Any]:
        return self.payload.get('args', [])

    @property
    def result(self) -> Any:
        return self.payload.get('result')

    @property
    def error(self) -> Optional[Dict[str, Any]]:
        return self.payload.get('error')

    @property
    def succeeded(self) -> bool:
        return self.kind == TraceEventKind.CALL and 'error' not in self.payload

    def to_dict(self) -> Dict[str, Any]:
        record = dict(self.payload)
        record.update({'seq': self.seq, 'event': self.kind.value, 'at': self.at})
        return record

    @classmethod
    def from_dict(cls, record: Dict[str, Any]) -> 'TraceEvent':
        payload = {key: value for key, value in record.items() if key not in ('seq', 'event', 'at')}
        return cls(seq=record['seq'], kind=TraceEventKind(record['event']), at=record['at'], payload=payload)


def _dumps(record: Dict[str, Any]) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False)


@dataclass(frozen=True)
class ExecutionTrace:
    """
    Неизменяемая трасса одного выполнения.

    Ровно одно событие Begin (первое) и одно End (последнее);
    статус End совпадает с полем status.
    """
    events: Tuple[TraceEvent, ...]
    status: ExecutionStatus
    steps_used: int = 0
    intention_id: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'events', tuple(self.events))

    @property
    def calls(self) -> List[TraceEvent]:
        return [event for event in self.events if event.kind == TraceEventKind.CALL]

    @property
    def outputs(self) -> List[str]:
        return [event.payload['text'] for event in self.events if event.kind == TraceEventKind.OUTPUT]

    @property
    def errors(self) -> List[TraceEvent]:
        return [event for event in self.events if event.kind == TraceEventKind.ERROR]

    @property
    def error_kind(self) -> Optional[str]:
        errors = self.errors
        return errors[-1].payload.get('kind') if errors else None

    def called_names(self) -> List[str]:
        return [event.name for event in self.calls]

    def to_jsonl(self) -> str:
        lines = [_dumps(event.to_dict()) for event in self.events]
        lines.append(_dumps({
            'event': 'summary',
            'status': self.status.value,
            'steps_used': self.steps_used,
            'intention_id': self.intention_id,
            'events': len(self.events),
        }))
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_jsonl(cls, text: str) -> 'ExecutionTrace':
        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not records or records[-1].get('event') != 'summary':
            raise ValueError('trace JSONL must end with a summary line')
        summary = records.pop()
        events = tuple(TraceEvent.from_dict(record) for record in records)
        if len(events) != summary['events']:
            raise ValueError(f"summary announces {summary['events']} events, found {len(events)}")
        return cls(
            events=events,
            status=ExecutionStatus(summary['status']),
            steps_used=summary['steps_used'],
            intention_id=summary.get('intention_id'),
        )

    @classmethod
    def rejected(cls, kind: str, message: str, intention_id: Optional[int] = None,
                 at: float = 0.0, **details) -> 'ExecutionTrace':
        """Трасса для программы, не прошедшей разбор"""
        error = {'kind': kind, 'message': message}
        error.update(details)
        return cls(
            events=(
                TraceEvent(0, TraceEventKind.BEGIN, at, {'intention_id': intention_id}),
                TraceEvent(1, TraceEventKind.ERROR, at, error),
                TraceEvent(2, TraceEventKind.END, at, {'status': ExecutionStatus.PARSE_REJECTED.value}),
            ),
            status=ExecutionStatus.PARSE_REJECTED,
            steps_used=0,
            intention_id=intention_id,
        )


class TraceRecorder(Observer):
    """Наблюдатель, собирающий события в список"""

    def __init__(self):
        self.events: List[TraceEvent] = []

    def update(self, event: str, data: Any) -> None:
        self.events.append(data)


class ConsoleTraceObserver(Observer):
    """Печать событий по мере выполнения (CLI, режим -v)"""

    def __init__(self, write):
        self.write = write

    def update(self, event: str, data: Any) -> None:
        if event == TraceEventKind.CALL.value:
            marker = '❌' if data.error else '📞'
            self.write(f"{marker} {data.name}({', '.join(repr(arg) for arg in data.args)})")
        elif event == TraceEventKind.OUTPUT.value:
            self.write(f"🖨️  {data.payload['text']}")
        elif event == TraceEventKind.ERROR.value:
            self.write(f"⚠️  {data.payload.get('kind')}: {data.payload.get('message')}")
