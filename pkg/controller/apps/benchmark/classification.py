"""
classify_success: (ответ, трасса, окружение, критерий) -> (успех, причина).

Порядок причин неудачи: no_code_block, parse_rejected, runtime_error,
limit_exceeded, wrong_functions, predicate_failed. Успех проверяется
сразу после parse_rejected: вариант критерия может допускать и
завершение с ошибкой.
"""

from enum import Enum
from typing import Optional, Tuple, Union

from apps.analysis.exceptions import NoCodeBlock
from apps.analysis.extraction import ParsedResponse
from apps.environment.environment import HostEnvironment
from apps.interpreter.trace import ExecutionStatus, ExecutionTrace

from .criteria import SuccessCriterion


class FailureReason(str, Enum):
    NO_CODE_BLOCK = 'no_code_block'
    PARSE_REJECTED = 'parse_rejected'
    RUNTIME_ERROR = 'runtime_error'
    LIMIT_EXCEEDED = 'limit_exceeded'
    WRONG_FUNCTIONS = 'wrong_functions'
    PREDICATE_FAILED = 'predicate_failed'


_STATUS_REASONS = {
    ExecutionStatus.RUNTIME_ERROR: FailureReason.RUNTIME_ERROR,
    ExecutionStatus.LIMIT_EXCEEDED: FailureReason.LIMIT_EXCEEDED,
}


def _wrong_functions(trace: ExecutionTrace, criterion: SuccessCriterion) -> bool:
    if not criterion.expected_functions:
        return False
    called = set(trace.called_names())
    return bool(called) and not called & set(criterion.expected_functions)


def classify_success(parsed: Union[ParsedResponse, NoCodeBlock, None], trace: Optional[ExecutionTrace],
                     env_after: Optional[HostEnvironment],
                     criterion: Optional[SuccessCriterion]) -> Tuple[bool, Optional[FailureReason]]:
    """
    Без критерия (произвольное намерение в resolve) успехом считается
    завершение со статусом completed.
    """
    if parsed is None or isinstance(parsed, NoCodeBlock) or trace is None:
        return False, FailureReason.NO_CODE_BLOCK
    if trace.status == ExecutionStatus.PARSE_REJECTED:
        return False, FailureReason.PARSE_REJECTED

    if criterion is None:
        if trace.status == ExecutionStatus.COMPLETED:
            return True, None
        return False, _STATUS_REASONS[trace.status]

    if criterion.matching_variant(trace, env_after) is not None:
        return True, None
    if trace.status in _STATUS_REASONS:
        return False, _STATUS_REASONS[trace.status]
    if _wrong_functions(trace, criterion):
        return False, FailureReason.WRONG_FUNCTIONS
    return False, FailureReason.PREDICATE_FAILED
