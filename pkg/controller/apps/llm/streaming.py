"""
Потоковые события и ответ с замерами времени.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass(frozen=True)
class StreamEvent:
    chunk_text: str
    at: float  # секунды по внедрённым часам


@dataclass(frozen=True)
class TimedResponse:
    """
    Ответ модели с метриками.

    time_to_first_token - мс от отправки запроса до первого непустого чанка,
    response_time - с от отправки запроса до закрытия стрима.
    """
    full_text: str
    events: List[StreamEvent] = field(default_factory=list)
    time_to_first_token: float = 0.0
    response_time: float = 0.0
    sent_at: float = 0.0

    @property
    def ttft_ms(self) -> float:
        return self.time_to_first_token

    @property
    def response_time_s(self) -> float:
        return self.response_time

    def to_dict(self) -> Dict[str, Any]:
        return {
            'full_text': self.full_text,
            'time_to_first_token_ms': self.time_to_first_token,
            'response_time_s': self.response_time,
            'chunks': [{'text': event.chunk_text, 'at': event.at} for event in self.events],
        }
