"""
FunctionTable - каталог функций хоста с проверкой типов при вызове.

Callbacks receive the host environment first, then the declared
parameters positionally:

    def sleep(env, seconds): ...
    table.register(parse_signature('function sleep(seconds: Integer): void'), sleep)
"""

import inspect
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence

from .exceptions import (
    ArgumentTypeMismatch,
    ArityMismatch,
    DuplicateName,
    HostError,
    ReturnTypeMismatch,
    TableFrozen,
    TableNotFrozen,
    UnknownFunction,
)
from .signatures import FunctionKind, FunctionSpec, parse_signature, render_signature
from .types import check_value, describe_value, render_type

logger = logging.getLogger(__name__)

Callback = Callable[..., Any]


@dataclass(frozen=True)
class TableEntry:
    spec: FunctionSpec
    callback: Callback


def _accepts_arity(callback: Callback, arity: int) -> bool:
    try:
        signature = inspect.signature(callback)
    except (TypeError, ValueError):
        # Builtins without introspectable signatures
        return True
    try:
        signature.bind(None, *([None] * arity))
    except TypeError:
        return False
    return True


class FunctionTable:
    """
    Каталог функций: имя -> (FunctionSpec, callback).

    Порядок регистрации сохраняется и определяет порядок документации.
    После freeze() таблица неизменяема и может разделяться между потоками.
    """

    def __init__(self):
        self._entries: Dict[str, TableEntry] = {}
        self._frozen = False

    # ------------------------------------------------------------------
    # Registration
    # ------------------------------------------------------------------

    def register(self, spec: FunctionSpec, callback: Callback) -> 'FunctionTable':
        if self._frozen:
            raise TableFrozen(spec.name)
        if spec.name in self._entries:
            raise DuplicateName(spec.name)
        if not _accepts_arity(callback, spec.arity):
            raise ArityMismatch(
                spec.name, spec.arity, -1,
                detail=f"callback does not accept (env, {spec.arity} argument(s))",
            )
        self._entries[spec.name] = TableEntry(spec, callback)
        logger.debug(f"Registered {render_signature(spec)}")
        return self

    def register_signature(self, line: str, callback: Callback,
                           kind: FunctionKind = FunctionKind.STUB) -> 'FunctionTable':
        return self.register(parse_signature(line, kind=kind), callback)

    def freeze(self) -> 'FunctionTable':
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # ------------------------------------------------------------------
    # Lookup
    # ------------------------------------------------------------------

    def lookup(self, name: str) -> FunctionSpec:
        try:
            return self._entries[name].spec
        except KeyError:
            raise UnknownFunction(name) from None

    def names(self) -> List[str]:
        return list(self._entries)

    def specs(self) -> List[FunctionSpec]:
        return [entry.spec for entry in self._entries.values()]

    def __contains__(self, name: object) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[FunctionSpec]:
        return iter(self.specs())

    # ------------------------------------------------------------------
    # Invocation
    # ------------------------------------------------------------------

    def bind_arguments(self, name: str, args: Sequence[Any],
                       kwargs: Optional[Mapping[str, Any]] = None) -> List[Any]:
        """Resolve positional + keyword arguments into the declared order"""
        if name not in self._entries:
            raise UnknownFunction(name)
        spec = self._entries[name].spec
        args = list(args)
        kwargs = dict(kwargs or {})
        if len(args) > spec.arity:
            raise ArityMismatch(name, spec.arity, len(args) + len(kwargs))

        bound: List[Any] = list(args)
        for param in spec.params[len(args):]:
            if param.name not in kwargs:
                raise ArityMismatch(name, spec.arity, len(args) + len(kwargs))
            bound.append(kwargs.pop(param.name))
        if kwargs:
            unexpected = ', '.join(sorted(kwargs))
            raise ArityMismatch(name, spec.arity, len(bound) + len(kwargs),
                                detail=f"unexpected keyword argument(s) {unexpected}")
        return bound

    def check_arguments(self, name: str, args: Sequence[Any]) -> None:
        spec = self.lookup(name)
        if len(args) != spec.arity:
            raise ArityMismatch(name, spec.arity, len(args))
        for param, value in zip(spec.params, args):
            if not check_value(value, param.type):
                raise ArgumentTypeMismatch(name, param.name, render_type(param.type), describe_value(value))

    def invoke(self, name: str, args: Sequence[Any], env: Any,
               kwargs: Optional[Mapping[str, Any]] = None) -> Any:
        """
        Вызвать функцию каталога.

        Все проверки выполняются до вызова callback; ошибки callback
        оборачиваются в HostError.
        """
        if not self._frozen:
            raise TableNotFrozen()
        bound = self.bind_arguments(name, args, kwargs)
        self.check_arguments(name, bound)
        entry = self._entries[name]

        try:
            result = entry.callback(env, *bound)
        except HostError:
            raise
        except Exception as exc:
            logger.debug(f"Callback {name} raised {type(exc).__name__}: {exc}")
            raise HostError(f"{type(exc).__name__}: {exc}") from exc

        if not check_value(result, entry.spec.return_type):
            raise ReturnTypeMismatch(name, render_type(entry.spec.return_type), describe_value(result))
        return result
