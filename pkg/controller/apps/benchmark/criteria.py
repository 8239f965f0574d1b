"""
Критерии успеха - данные, а не код.

Schema `intent-forge/criteria@1`:

    schema: intent-forge/criteria@1
    criteria:
      - intention_id: 1
        expected_functions: [sleep]
        variants:
          - name: direct
            all:
              - called_with: {name: sleep, args: [5]}
              - status_is: completed

Намерение решено, если выполняется хотя бы один вариант; вариант
выполняется, если выполняются все его предикаты. called и called_with
учитывают только вызовы, завершившиеся без ошибки.
"""

import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import yaml

from apps.environment.environment import HostEnvironment
from apps.environment.matching import normalize
from apps.interpreter.trace import ExecutionStatus, ExecutionTrace
from core.patterns.strategy import StrategyRegistry

from .exceptions import CriteriaError, UnknownMatcher, UnknownProbe

logger = logging.getLogger(__name__)

CRITERIA_SCHEMA = 'intent-forge/criteria@1'


# ============================================================================
# Argument matchers
# ============================================================================

class ArgumentMatcher(ABC):

    @abstractmethod
    def matches(self, value: Any) -> bool:
        pass


matchers: StrategyRegistry = StrategyRegistry('argument matcher', UnknownMatcher)


@dataclass(frozen=True)
class Literal(ArgumentMatcher):
    expected: Any

    def matches(self, value: Any) -> bool:
        if isinstance(self.expected, bool) or isinstance(value, bool):
            return type(value) is type(self.expected) and value == self.expected
        return value == self.expected


@matchers.register('any')
@dataclass(frozen=True)
class AnyValue(ArgumentMatcher):
    option: Any = True

    def matches(self, value: Any) -> bool:
        return True


@matchers.register('contains')
@dataclass(frozen=True)
class Contains(ArgumentMatcher):
    """Подстрока без учёта регистра; для списков - элемент, содержащий подстроку"""
    needle: str

    def matches(self, value: Any) -> bool:
        needle = str(self.needle).lower()
        if isinstance(value, str):
            return needle in value.lower()
        if isinstance(value, list):
            return any(isinstance(item, str) and needle in item.lower() for item in value)
        return False


@matchers.register('regex')
@dataclass(frozen=True)
class Regex(ArgumentMatcher):
    pattern: str

    def matches(self, value: Any) -> bool:
        return isinstance(value, str) and re.search(self.pattern, value, re.IGNORECASE | re.DOTALL) is not None


@matchers.register('one_of')
@dataclass(frozen=True)
class OneOf(ArgumentMatcher):
    options: Tuple[Any, ...]

    def matches(self, value: Any) -> bool:
        return any(Literal(option).matches(value) for option in self.options)


@matchers.register('between')
@dataclass(frozen=True)
class Between(ArgumentMatcher):
    """Числовой диапазон, границы включены"""
    low: float
    high: float

    def matches(self, value: Any) -> bool:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        return self.low <= value <= self.high


def build_matcher(spec: Any) -> ArgumentMatcher:
    if isinstance(spec, dict) and len(spec) == 1:
        name, option = next(iter(spec.items()))
        matcher_class = matchers.get(name)
        if matcher_class is OneOf:
            return OneOf(tuple(option))
        if matcher_class is Between:
            low, high = option
            return Between(low, high)
        return matcher_class(option)
    return Literal(spec)


# ============================================================================
# Environment probes
# ============================================================================

def _audio_played(env: HostEnvironment) -> bool:
    return bool(env.audio_player.history)


def _audio_player_stopped(env: HostEnvironment) -> bool:
    return env.audio_player.stop_count > 0 and env.audio_player.current is None


def _email_sent_with_attachment(env: HostEnvironment) -> bool:
    return any(email.attachments for email in env.sent_emails)


def _car_title_sent_to_insurer(env: HostEnvironment) -> bool:
    insurers = {contact.email for contact in env.contacts if 'insurance' in normalize(contact.display)}
    return any(
        email.to in insurers and any('car title' in normalize(path) for path in email.attachments)
        for email in env.sent_emails
    )


PROBES: Dict[str, Callable[[HostEnvironment], bool]] = {
    'audio_played': _audio_played,
    'audio_player_stopped': _audio_player_stopped,
    'email_sent_with_attachment': _email_sent_with_attachment,
    'car_title_sent_to_insurer': _car_title_sent_to_insurer,
}


# ============================================================================
# Predicates
# ============================================================================

class Predicate(ABC):

    @abstractmethod
    def holds(self, trace: ExecutionTrace, env: Optional[HostEnvironment]) -> bool:
        pass


@dataclass(frozen=True)
class Called(Predicate):
    name: str

    def holds(self, trace, env) -> bool:
        return any(event.succeeded and event.name == self.name for event in trace.calls)


@dataclass(frozen=True)
class CalledWith(Predicate):
    name: str
    args: Tuple[ArgumentMatcher, ...]

    def holds(self, trace, env) -> bool:
        for event in trace.calls:
            if not event.succeeded or event.name != self.name or len(event.args) < len(self.args):
                continue
            if all(matcher.matches(value) for matcher, value in zip(self.args, event.args)):
                return True
        return False


@dataclass(frozen=True)
class NotCalled(Predicate):
    name: str

    def holds(self, trace, env) -> bool:
        return all(event.name != self.name for event in trace.calls)


@dataclass(frozen=True)
class StatusIs(Predicate):
    status: ExecutionStatus

    def holds(self, trace, env) -> bool:
        return trace.status == self.status


@dataclass(frozen=True)
class OutputContains(Predicate):
    text: str

    def holds(self, trace, env) -> bool:
        needle = self.text.lower()
        return any(needle in output.lower() for output in trace.outputs)


@dataclass(frozen=True)
class EnvCheck(Predicate):
    probe: str

    def holds(self, trace, env) -> bool:
        return env is not None and PROBES[self.probe](env)


def build_predicate(spec: Dict[str, Any]) -> Predicate:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ValueError(f"predicate must be a single-key mapping, got {spec!r}")
    kind, value = next(iter(spec.items()))
    if kind == 'called':
        return Called(str(value))
    if kind == 'called_with':
        return CalledWith(str(value['name']), tuple(build_matcher(arg) for arg in value.get('args') or []))
    if kind == 'not_called':
        return NotCalled(str(value))
    if kind == 'status_is':
        return StatusIs(ExecutionStatus(value))
    if kind == 'output_contains':
        return OutputContains(str(value))
    if kind == 'env_check':
        if value not in PROBES:
            raise UnknownProbe(value)
        return EnvCheck(str(value))
    raise ValueError(f"unknown predicate {kind!r}")


# ============================================================================
# Criteria
# ============================================================================

@dataclass(frozen=True)
class Variant:
    name: str
    predicates: Tuple[Predicate, ...]

    def holds(self, trace: ExecutionTrace, env: Optional[HostEnvironment]) -> bool:
        return all(predicate.holds(trace, env) for predicate in self.predicates)


@dataclass(frozen=True)
class SuccessCriterion:
    """
    Критерий успеха одного намерения.

    Оценка чистая и детерминированная: читает только трассу
    и состояние окружения после выполнения.
    """
    intention_id: int
    variants: Tuple[Variant, ...]
    expected_functions: Tuple[str, ...] = ()

    def matching_variant(self, trace: ExecutionTrace, env: Optional[HostEnvironment]) -> Optional[str]:
        for variant in self.variants:
            if variant.holds(trace, env):
                return variant.name
        return None


def parse_criteria(data: Dict[str, Any], path: Union[str, Path] = '<memory>') -> Dict[int, SuccessCriterion]:
    if not isinstance(data, dict) or data.get('schema') != CRITERIA_SCHEMA:
        found = data.get('schema') if isinstance(data, dict) else None
        raise CriteriaError(path, f"expected schema {CRITERIA_SCHEMA!r}, got {found!r}")

    criteria: Dict[int, SuccessCriterion] = {}
    for index, item in enumerate(data.get('criteria') or []):
        try:
            intention_id = int(item['intention_id'])
            variants = []
            for position, variant in enumerate(item.get('variants') or []):
                predicates = tuple(build_predicate(spec) for spec in variant.get('all') or [])
                if not predicates:
                    raise ValueError(f"variant {position} has no predicates")
                variants.append(Variant(str(variant.get('name', f"variant-{position + 1}")), predicates))
        except (KeyError, TypeError, ValueError) as exc:
            raise CriteriaError(path, f"criteria[{index}]: {exc}") from exc
        if not variants:
            raise CriteriaError(path, f"criteria[{index}] has no variants")
        if intention_id in criteria:
            raise CriteriaError(path, f"duplicate criteria for intention {intention_id}")
        criteria[intention_id] = SuccessCriterion(
            intention_id=intention_id,
            variants=tuple(variants),
            expected_functions=tuple(item.get('expected_functions') or ()),
        )
    return criteria


def load_criteria(path: Union[str, Path]) -> Dict[int, SuccessCriterion]:
    path = Path(path)
    try:
        with path.open(encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as exc:
        raise CriteriaError(path, str(exc)) from exc
    criteria = parse_criteria(data, path)
    logger.info(f"Loaded criteria for {len(criteria)} intentions from {path.name}")
    return criteria
