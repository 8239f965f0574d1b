"""
Прогон матрицы (модель x намерение).

Конвейер одного прогона:
build_prompt -> complete_stream -> extract_code -> parse_workflow
-> execute_workflow -> classify_success.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from apps.analysis.exceptions import NoCodeBlock
from apps.analysis.extraction import ParsedResponse, extract_code
from apps.environment.environment import HostEnvironment
from apps.environment.loader import EnvironmentFactory
from apps.functions.table import FunctionTable
from apps.interpreter.evaluator import run_workflow_source
from apps.interpreter.limits import ExecLimits
from apps.interpreter.trace import ExecutionTrace
from apps.llm.config import ModelConfig, TransportKind
from apps.llm.exceptions import EmptyStream, Timeout, TransportError
from apps.llm.gateway import LLMGateway, QueryBackend
from apps.llm.streaming import TimedResponse
from apps.prompts.builder import build_prompt
from apps.prompts.intentions import Intention
from core.patterns.observer import Observer
from core.services.clock import MonotonicClock, VirtualClock

from .classification import classify_success
from .criteria import SuccessCriterion
from .records import LIVE_LABEL, RECONSTRUCTION_LABEL, BenchmarkReport, RunRecord

logger = logging.getLogger(__name__)


@dataclass
class RunOutcome:
    """Все артефакты одного прогона (для resolve и отладки)"""
    intention: Intention
    model: ModelConfig
    response: Optional[TimedResponse]
    parsed: Union[ParsedResponse, NoCodeBlock, None]
    trace: Optional[ExecutionTrace]
    env: HostEnvironment
    record: RunRecord


def trace_ref_for(model_name: str, intention_id: int, repetition: int = 0, repeat: int = 1) -> str:
    ref = f"{model_name}/{intention_id}"
    return f"{ref}/{repetition}" if repeat > 1 else ref


class BenchmarkRunner:
    """
    Прогоняет конвейер для пар (модель, намерение).

    Каждый прогон получает свежее окружение и свой экземпляр шлюза;
    общий у прогонов только замороженный каталог функций.
    """

    def __init__(self, table: FunctionTable, env_factory: EnvironmentFactory,
                 limits: Optional[ExecLimits] = None,
                 criteria: Optional[Dict[int, SuccessCriterion]] = None,
                 observers: Iterable[Observer] = (),
                 env_overrides: Optional[Dict[str, Any]] = None,
                 real_time: bool = False):
        self.table = table
        self.env_factory = env_factory
        self.limits = limits or ExecLimits.from_settings()
        self.criteria = criteria or {}
        self.observers = tuple(observers)
        self.env_overrides = dict(env_overrides or {})
        self.real_time = real_time

    def _build_environment(self, model: ModelConfig) -> HostEnvironment:
        live = model.transport == TransportKind.LIVE
        overrides = dict(self.env_overrides)
        overrides['clock'] = MonotonicClock() if self.real_time else VirtualClock()
        if live:
            overrides.setdefault('llm_backend', QueryBackend(model))
            overrides.setdefault('live_web', True)
        return self.env_factory.build(**overrides)

    def run_once(self, intention: Intention, model: ModelConfig, repetition: int = 0,
                 repeat: int = 1) -> RunOutcome:
        live = model.transport == TransportKind.LIVE
        env = self._build_environment(model)
        gateway = LLMGateway(model, clock=MonotonicClock() if live else VirtualClock())
        bundle = build_prompt(intention, self.table, model)
        trace_ref = trace_ref_for(model.model_name, intention.id, repetition, repeat)
        logger.info(f"▶️  {model.model_name} / intention {intention.id}")

        response: Optional[TimedResponse] = None
        parsed: Union[ParsedResponse, NoCodeBlock, None] = None
        trace: Optional[ExecutionTrace] = None
        error: Optional[str] = None
        try:
            response = gateway.complete_stream(bundle)
        except (TransportError, Timeout, EmptyStream) as exc:
            # Live failures are results of the run, not harness errors
            logger.warning(f"⚠️ {model.model_name} / intention {intention.id}: {exc}")
            error = str(exc)

        if response is not None:
            try:
                parsed = extract_code(response.full_text)
            except NoCodeBlock as exc:
                parsed = exc
            else:
                trace = run_workflow_source(parsed.code, self.table, env, self.limits,
                                            intention.id, self.observers)

        success, reason = classify_success(parsed, trace, env, self.criteria.get(intention.id))
        criterion = self.criteria.get(intention.id)
        prose = isinstance(parsed, ParsedResponse)
        record = RunRecord(
            model_name=model.model_name,
            intention_id=intention.id,
            success=success,
            failure_reason=reason,
            has_preamble=prose and parsed.has_preamble,
            has_postamble=prose and parsed.has_postamble,
            has_comments=prose and parsed.has_comments,
            ttft_ms=response.ttft_ms if response else 0.0,
            response_time_s=response.response_time_s if response else 0.0,
            trace_ref=trace_ref if trace is not None else None,
            repetition=repetition,
            proprietary=model.proprietary,
            matched_variant=criterion.matching_variant(trace, env) if success and criterion and trace else None,
            error_kind=trace.error_kind if trace is not None else None,
            error=error,
        )
        mark = '✅' if success else f"❌ {reason.value}"
        logger.info(f"⏹️  {model.model_name} / intention {intention.id}: {mark}")
        return RunOutcome(intention, model, response, parsed, trace, env, record)

    def _jobs(self, intentions: Sequence[Intention], models: Sequence[ModelConfig],
              repeat: int) -> List[Tuple[Intention, ModelConfig, int]]:
        return [
            (intention, model, repetition)
            for model in models
            for intention in intentions
            for repetition in range(repeat)
        ]

    def run_matrix(self, intentions: Sequence[Intention], models: Sequence[ModelConfig],
                   repeat: int = 1, concurrency: int = 1) -> BenchmarkReport:
        """
        Одна запись на (модель, намерение, повтор) в этом порядке.

        Фикстуры прогоняются последовательно; live-модели - в пуле
        потоков до concurrency одновременных прогонов.
        """
        if repeat < 1:
            raise ValueError(f"repeat must be at least 1, got {repeat}")
        jobs = self._jobs(intentions, models, repeat)
        live = any(model.transport == TransportKind.LIVE for model in models)

        def run(job) -> RunOutcome:
            intention, model, repetition = job
            return self.run_once(intention, model, repetition, repeat)

        if live and concurrency > 1:
            with ThreadPoolExecutor(max_workers=concurrency) as pool:
                outcomes = list(pool.map(run, jobs))
        else:
            outcomes = [run(job) for job in jobs]

        report = BenchmarkReport(label=LIVE_LABEL if live else RECONSTRUCTION_LABEL)
        for outcome in outcomes:
            report.records.append(outcome.record)
            if outcome.trace is not None:
                report.traces[outcome.record.trace_ref] = outcome.trace
        logger.info(f"Benchmark finished: {len(report.records)} runs")
        return report


def run_matrix(intentions: Sequence[Intention], models: Sequence[ModelConfig], table: FunctionTable,
               env_factory: EnvironmentFactory, limits: Optional[ExecLimits] = None,
               criteria: Optional[Dict[int, SuccessCriterion]] = None,
               repeat: int = 1, concurrency: int = 1) -> BenchmarkReport:
    runner = BenchmarkRunner(table, env_factory, limits, criteria)
    return runner.run_matrix(intentions, models, repeat=repeat, concurrency=concurrency)
