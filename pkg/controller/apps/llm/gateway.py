"""
LLM Gateway: отправка промпта и сбор потокового ответа с метриками.

TTFT измеряется от момента отправки запроса до первого чанка,
содержащего хотя бы один символ; Response Time - до закрытия стрима.
"""

import logging
from typing import Callable, List, Optional

from apps.prompts.builder import ModelParams, PromptBundle
from core.services.clock import Clock, MonotonicClock

from .config import ModelConfig
from .exceptions import EmptyStream, Timeout
from .factory import get_transport
from .streaming import StreamEvent, TimedResponse
from .transports import Transport

logger = logging.getLogger(__name__)


class LLMGateway:
    """
    Один запрос в полёте на экземпляр; разные экземпляры независимы.
    """

    def __init__(self, config: ModelConfig, clock: Optional[Clock] = None,
                 transport: Optional[Transport] = None):
        self.config = config
        self.clock = clock or MonotonicClock()
        self.transport = transport or get_transport(config)

    def complete_stream(self, bundle: PromptBundle) -> TimedResponse:
        if not bundle.user_message:
            raise ValueError("user_message must not be empty")

        config = self.config
        sent_at = self.clock.now()
        events: List[StreamEvent] = []

        for chunk in self.transport.stream(bundle, config, self.clock):
            at = self.clock.now()
            if at - sent_at > config.request_timeout:
                raise Timeout(config.request_timeout)
            if not chunk:
                continue
            events.append(StreamEvent(chunk, at))
            logger.debug(f"{config.model_name}: chunk of {len(chunk)} chars at +{(at - sent_at) * 1000:.1f} ms")

        ended_at = self.clock.now()
        if ended_at - sent_at > config.request_timeout:
            raise Timeout(config.request_timeout)
        if not events:
            raise EmptyStream(config.model_name)

        response = TimedResponse(
            full_text=''.join(event.chunk_text for event in events),
            events=events,
            time_to_first_token=round((events[0].at - sent_at) * 1000.0, 3),
            response_time=round(ended_at - sent_at, 6),
            sent_at=sent_at,
        )
        logger.info(
            f"{config.model_name}: {len(response.full_text)} chars, "
            f"TTFT {response.time_to_first_token:.1f} ms, RT {response.response_time:.2f} s"
        )
        return response


def complete_stream(bundle: PromptBundle, config: ModelConfig, clock: Optional[Clock] = None,
                    transport: Optional[Transport] = None) -> TimedResponse:
    return LLMGateway(config, clock=clock, transport=transport).complete_stream(bundle)


class QueryBackend:
    """
    Бэкенд query_llm для live-режима: вопрос уходит той же модели
    отдельным одноходовым запросом.
    """

    ROLE = 'You are a helpful assistant'

    def __init__(self, config: ModelConfig, clock: Optional[Clock] = None):
        self.config = config
        self.clock = clock or MonotonicClock()

    def __call__(self, query: str) -> str:
        bundle = PromptBundle(
            role_message=self.ROLE,
            user_message=query,
            model_params=ModelParams(temperature=self.config.temperature, model_name=self.config.model_name),
        )
        return complete_stream(bundle, self.config, clock=self.clock).full_text


QueryFn = Callable[[str], str]
