"""
Записи прогонов, агрегаты по моделям и отчёт.
"""

import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from apps.interpreter.trace import ExecutionTrace

from .classification import FailureReason
from .exceptions import RecordsError

logger = logging.getLogger(__name__)

REPORT_SCHEMA = 'intent-forge/report@1'
RECONSTRUCTION_LABEL = 'reconstruction'
LIVE_LABEL = 'live'


@dataclass(frozen=True)
class RunRecord:
    """
    Результат одного прогона (модель, намерение, повтор).

    failure_reason задан тогда и только тогда, когда success = False.
    """
    model_name: str
    intention_id: int
    success: bool
    failure_reason: Optional[FailureReason]
    has_preamble: bool
    has_postamble: bool
    has_comments: bool
    ttft_ms: float
    response_time_s: float
    trace_ref: Optional[str] = None
    repetition: int = 0
    proprietary: bool = False
    matched_variant: Optional[str] = None
    error_kind: Optional[str] = None
    error: Optional[str] = None

    def __post_init__(self):
        if self.success == (self.failure_reason is not None):
            raise ValueError(f"{self.model_name}/{self.intention_id}: failure_reason must be set iff the run failed")
        if self.failure_reason is not None:
            object.__setattr__(self, 'failure_reason', FailureReason(self.failure_reason))

    @property
    def has_prose(self) -> bool:
        return self.has_preamble or self.has_postamble

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['failure_reason'] = self.failure_reason.value if self.failure_reason else None
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunRecord':
        known = {item.name for item in fields(cls)}
        return cls(**{key: value for key, value in data.items() if key in known})


@dataclass(frozen=True)
class ModelAggregate:
    model_name: str
    proprietary: bool
    runs: int
    success_count: int
    fail_count: int
    preamble_count: int
    postamble_count: int
    prose_count: int
    comment_count: int
    avg_response_time_s: float
    avg_ttft_ms: float


def _mean(values: List[float]) -> float:
    return round(sum(values) / len(values), 6) if values else 0.0


def aggregate_report(records: List[RunRecord]) -> Dict[str, ModelAggregate]:
    """Средние по всем прогонам модели; модели в порядке первого появления"""
    grouped: Dict[str, List[RunRecord]] = {}
    for record in records:
        grouped.setdefault(record.model_name, []).append(record)

    aggregates = {}
    for model_name, runs in grouped.items():
        successes = sum(1 for run in runs if run.success)
        aggregates[model_name] = ModelAggregate(
            model_name=model_name,
            proprietary=runs[0].proprietary,
            runs=len(runs),
            success_count=successes,
            fail_count=len(runs) - successes,
            preamble_count=sum(1 for run in runs if run.has_preamble),
            postamble_count=sum(1 for run in runs if run.has_postamble),
            prose_count=sum(1 for run in runs if run.has_prose),
            comment_count=sum(1 for run in runs if run.has_comments),
            avg_response_time_s=_mean([run.response_time_s for run in runs]),
            avg_ttft_ms=_mean([run.ttft_ms for run in runs]),
        )
    return aggregates


@dataclass
class BenchmarkReport:
    records: List[RunRecord] = field(default_factory=list)
    label: str = RECONSTRUCTION_LABEL
    traces: Dict[str, ExecutionTrace] = field(default_factory=dict)

    @property
    def aggregates(self) -> Dict[str, ModelAggregate]:
        return aggregate_report(self.records)

    @property
    def model_names(self) -> List[str]:
        return list(dict.fromkeys(record.model_name for record in self.records))

    @property
    def intention_ids(self) -> List[int]:
        return list(dict.fromkeys(record.intention_id for record in self.records))

    @property
    def repeats(self) -> int:
        return max((record.repetition for record in self.records), default=0) + 1

    def records_for(self, model_name: str, intention_id: int) -> List[RunRecord]:
        return [
            record for record in self.records
            if record.model_name == model_name and record.intention_id == intention_id
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': REPORT_SCHEMA,
            'label': self.label,
            'records': [record.to_dict() for record in self.records],
        }

    def write_traces(self, directory: Union[str, Path]) -> List[Path]:
        """Записать трассы в <dir>/<trace_ref>.jsonl"""
        directory = Path(directory)
        written = []
        for trace_ref, trace in self.traces.items():
            target = directory / f"{trace_ref}.jsonl"
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(trace.to_jsonl(), encoding='utf-8')
            written.append(target)
        logger.info(f"Wrote {len(written)} traces to {directory}")
        return written


def load_report(path: Union[str, Path]) -> BenchmarkReport:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except (OSError, ValueError) as exc:
        raise RecordsError(path, str(exc)) from exc
    if not isinstance(data, dict) or data.get('schema') != REPORT_SCHEMA:
        raise RecordsError(path, f"expected schema {REPORT_SCHEMA!r}")
    try:
        records = [RunRecord.from_dict(item) for item in data.get('records') or []]
    except (TypeError, ValueError) as exc:
        raise RecordsError(path, str(exc)) from exc
    return BenchmarkReport(records=records, label=str(data.get('label', RECONSTRUCTION_LABEL)))


def load_records(path: Union[str, Path]) -> List[RunRecord]:
    """Записи из JSON-отчёта (формат json команды bench)"""
    return load_report(path).records
