"""
Resource limits of one workflow execution.
"""

from dataclasses import dataclass

from django.conf import settings

from core.exceptions import ConfigurationError


@dataclass(frozen=True)
class ExecLimits:
    """
    max_wall_time измеряется на часах окружения: в режиме фикстур
    это виртуальное время (sleep его сдвигает).
    """
    max_steps: int = 100_000
    max_call_depth: int = 64
    max_wall_time: float = 30.0
    max_value_size: int = 1_000_000

    def __post_init__(self):
        for name in ('max_steps', 'max_call_depth', 'max_wall_time', 'max_value_size'):
            value = getattr(self, name)
            if isinstance(value, bool) or not value > 0:
                raise ConfigurationError(f"ExecLimits.{name} must be strictly positive, got {value!r}")

    @classmethod
    def from_settings(cls, **overrides) -> 'ExecLimits':
        values = {
            'max_steps': settings.WORKFLOW_MAX_STEPS,
            'max_call_depth': settings.WORKFLOW_MAX_CALL_DEPTH,
            'max_wall_time': settings.WORKFLOW_MAX_WALL_TIME,
            'max_value_size': settings.WORKFLOW_MAX_VALUE_SIZE,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
