"""
Runtime values and control-flow signals of the workflow interpreter.
"""

import ast
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

# except-clause families: a handler naming the key also catches the members
EXCEPTION_FAMILIES = {
    'ArithmeticError': {'ZeroDivisionError', 'OverflowError'},
    'LookupError': {'IndexError', 'KeyError'},
}
CATCH_ALL = {'Exception', 'BaseException'}


@dataclass(frozen=True)
class ErrorValue:
    """
    Перехватываемая ошибка workflow: вид + сообщение.

    str(e) даёт сообщение, как у исключений Python.
    """
    kind: str
    message: str
    status: Optional[int] = None

    def matches(self, handler_name: str) -> bool:
        if handler_name in CATCH_ALL or handler_name == self.kind:
            return True
        return self.kind in EXCEPTION_FAMILIES.get(handler_name, ())

    def __str__(self) -> str:
        return self.message

    def __repr__(self) -> str:
        return f"{self.kind}({self.message!r})"


class WorkflowRaise(Exception):
    """Ошибка, которую workflow может перехватить try/except"""

    def __init__(self, error: ErrorValue, line: int = 0):
        self.error = error
        self.line = line
        super().__init__(f"{error.kind}: {error.message}")


class LimitBreach(Exception):
    """Превышение лимита: не перехватывается кодом workflow"""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        self.message = message
        super().__init__(f"{kind}: {message}")


class ReturnSignal(Exception):
    def __init__(self, value: Any):
        self.value = value
        super().__init__()


class BreakSignal(Exception):
    pass


class ContinueSignal(Exception):
    pass


@dataclass(eq=False)
class WorkflowFunction:
    """Функция, определённая в программе; не является значением"""
    name: str
    params: List[str]
    defaults: List[Any]
    body: List[ast.stmt]
    closure: 'Scope'
    line: int = 0

    def bind(self, args: List[Any], kwargs: Dict[str, Any]) -> Dict[str, Any]:
        if len(args) > len(self.params):
            raise WorkflowRaise(ErrorValue(
                'TypeError',
                f"{self.name}() takes {len(self.params)} positional argument(s) but {len(args)} were given",
            ))
        bound = dict(zip(self.params, args))
        for name, value in kwargs.items():
            if name not in self.params:
                raise WorkflowRaise(ErrorValue('TypeError', f"{self.name}() got an unexpected keyword argument '{name}'"))
            if name in bound:
                raise WorkflowRaise(ErrorValue('TypeError', f"{self.name}() got multiple values for argument '{name}'"))
            bound[name] = value
        first_default = len(self.params) - len(self.defaults)
        for index, name in enumerate(self.params):
            if name in bound:
                continue
            if index >= first_default:
                bound[name] = self.defaults[index - first_default]
            else:
                raise WorkflowRaise(ErrorValue('TypeError', f"{self.name}() missing required argument: '{name}'"))
        return bound


@dataclass(eq=False)
class Scope:
    """Лексическая область видимости"""
    parent: Optional['Scope'] = None
    variables: Dict[str, Any] = field(default_factory=dict)

    def lookup(self, name: str) -> Tuple[bool, Any]:
        scope: Optional[Scope] = self
        while scope is not None:
            if name in scope.variables:
                return True, scope.variables[name]
            scope = scope.parent
        return False, None

    def assign(self, name: str, value: Any) -> None:
        self.variables[name] = value

    def child(self) -> 'Scope':
        return Scope(parent=self)


def type_name(value: Any) -> str:
    if isinstance(value, ErrorValue):
        return value.kind
    if isinstance(value, WorkflowFunction):
        return 'function'
    return type(value).__name__
