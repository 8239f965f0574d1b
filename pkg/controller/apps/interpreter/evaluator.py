"""
Tree-walking evaluator for workflow programs.

The only effects a program can reach are FunctionTable entries; each host
call is type-checked by the table and recorded as a Call event. Runtime
failures and limit breaches end up in the trace, never as exceptions.
"""

import ast
import copy
import logging
import operator
import sys
from typing import Any, Dict, Iterable, Iterator, List, Optional, Tuple

from apps.functions.exceptions import (
    ArgumentTypeMismatch,
    ArityMismatch,
    HostError,
    ReturnTypeMismatch,
    TableNotFrozen,
)
from apps.functions.table import FunctionTable
from apps.functions.types import STRING
from core.patterns.observer import Observer, Subject
from core.services.clock import Clock, MonotonicClock

from .builtins import BUILTIN_FUNCTIONS, METHOD_WHITELIST, SafeFormatter, exceeds_width, text_size_exceeds
from .exceptions import UnsupportedConstruct, WorkflowSyntaxError
from .limits import ExecLimits
from .parser import WorkflowProgram, parse_workflow
from .trace import ExecutionStatus, ExecutionTrace, TraceEvent, TraceEventKind, TraceRecorder
from .values import (
    BreakSignal,
    ContinueSignal,
    ErrorValue,
    LimitBreach,
    ReturnSignal,
    Scope,
    WorkflowFunction,
    WorkflowRaise,
    type_name,
)

logger = logging.getLogger(__name__)

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}

_COMPARISONS = {
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Is: operator.is_,
    ast.IsNot: operator.is_not,
    ast.In: lambda left, right: left in right,
    ast.NotIn: lambda left, right: left not in right,
}

# Kind reported when an error reaches the top level uncaught
UNCAUGHT_KINDS = {
    'NameError': 'RuntimeNameError',
    'TypeError': 'RuntimeTypeError',
    'AttributeError': 'RuntimeTypeError',
    'HostError': 'UncaughtHostError',
}

_NATIVE_ERRORS = (TypeError, ValueError, ZeroDivisionError, IndexError, KeyError,
                  OverflowError, AttributeError, RuntimeError)

_ITERABLE_TYPES = (str, list, tuple, dict, range)

# Python frames consumed per workflow call level, with headroom
_FRAMES_PER_CALL = 60


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def to_host_value(value: Any) -> Any:
    """Tuples become lists; containers are converted recursively"""
    if isinstance(value, (list, tuple)):
        return [to_host_value(item) for item in value]
    if isinstance(value, dict):
        return {key: to_host_value(item) for key, item in value.items()}
    return value


class Interpreter(Subject):
    """
    Интерпретатор одного выполнения.

    Экземпляр не разделяется между потоками; общий у всех только
    замороженный FunctionTable.
    """

    def __init__(self, table: FunctionTable, env: Any, limits: Optional[ExecLimits] = None,
                 clock: Optional[Clock] = None):
        super().__init__()
        if not table.frozen:
            raise TableNotFrozen()
        self.table = table
        self.env = env
        self.limits = limits or ExecLimits.from_settings()
        self.clock = clock or getattr(env, 'clock', None) or MonotonicClock()
        self._steps = 0
        self._depth = 0
        self._seq = 0
        self._line = 0
        self._started = 0.0

    # ------------------------------------------------------------------
    # Entry point
    # ------------------------------------------------------------------

    def execute(self, program: WorkflowProgram, intention_id: Optional[int] = None) -> ExecutionTrace:
        recorder = TraceRecorder()
        self.attach(recorder)
        self._steps = self._depth = self._seq = self._line = 0
        self._started = self.clock.now()
        self._ensure_recursion_headroom()

        status = ExecutionStatus.COMPLETED
        self._emit(TraceEventKind.BEGIN, intention_id=intention_id)
        global_scope = Scope()
        global_scope.assign('__name__', '__main__')
        try:
            self._exec_block(program.statements, global_scope)
        except WorkflowRaise as exc:
            status = ExecutionStatus.RUNTIME_ERROR
            kind = UNCAUGHT_KINDS.get(exc.error.kind, exc.error.kind)
            details = {'raised': exc.error.kind} if kind != exc.error.kind else {}
            if exc.error.status is not None:
                details['status'] = exc.error.status
            self._emit(TraceEventKind.ERROR, kind=kind, message=exc.error.message, line=exc.line, **details)
        except LimitBreach as exc:
            status = ExecutionStatus.LIMIT_EXCEEDED
            self._emit(TraceEventKind.ERROR, kind=exc.kind, message=exc.message, line=self._line)
        except RecursionError:
            status = ExecutionStatus.LIMIT_EXCEEDED
            self._emit(TraceEventKind.ERROR, kind='DepthLimitExceeded',
                       message='interpreter recursion limit reached', line=self._line)
        except MemoryError:
            status = ExecutionStatus.LIMIT_EXCEEDED
            self._emit(TraceEventKind.ERROR, kind='ValueSizeExceeded',
                       message='out of memory while building a value', line=self._line)
        except UnsupportedConstruct as exc:
            status = ExecutionStatus.RUNTIME_ERROR
            self._emit(TraceEventKind.ERROR, kind='UnsupportedConstruct', message=str(exc),
                       construct=exc.construct, line=exc.line)
        self._emit(TraceEventKind.END, status=status.value)
        self.detach(recorder)

        steps_used = min(self._steps, self.limits.max_steps)
        logger.debug(f"Workflow {intention_id or '-'} finished: {status.value}, {steps_used} steps")
        return ExecutionTrace(
            events=tuple(recorder.events),
            status=status,
            steps_used=steps_used,
            intention_id=intention_id,
        )

    def _ensure_recursion_headroom(self) -> None:
        needed = 1000 + _FRAMES_PER_CALL * self.limits.max_call_depth
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)

    # ------------------------------------------------------------------
    # Bookkeeping
    # ------------------------------------------------------------------

    def _emit(self, event_kind: TraceEventKind, **payload) -> None:
        at = round(self.clock.now() - self._started, 6)
        event = TraceEvent(seq=self._seq, kind=event_kind, at=at, payload=payload)
        self._seq += 1
        self.notify(event_kind.value, event)

    def _tick(self) -> None:
        self._steps += 1
        if self._steps > self.limits.max_steps:
            raise LimitBreach('StepLimitExceeded', f"more than {self.limits.max_steps} steps")
        if not self._steps & 0x3F:
            self._check_time()

    def _check_time(self) -> None:
        elapsed = self.clock.now() - self._started
        if elapsed > self.limits.max_wall_time:
            raise LimitBreach('TimeLimitExceeded', f"{elapsed:.3f}s elapsed, limit {self.limits.max_wall_time}s")

    def _breach_size(self, what: str) -> None:
        raise LimitBreach('ValueSizeExceeded', f"{what} exceeds {self.limits.max_value_size}")

    def _check_size(self, value: Any) -> None:
        limit = self.limits.max_value_size
        if isinstance(value, (str, list, tuple, dict)) and len(value) > limit:
            self._breach_size(f"{type_name(value)} of length {len(value)}")
        if _is_int(value) and value.bit_length() > limit:
            self._breach_size(f"integer of {value.bit_length()} bits")

    def _raise(self, kind: str, message: str):
        raise WorkflowRaise(ErrorValue(kind, message), self._line)

    def _native(self, function, *args, **kwargs) -> Any:
        """Run a Python operation, mapping its exceptions to catchable errors"""
        try:
            return function(*args, **kwargs)
        except RecursionError:
            raise
        except _NATIVE_ERRORS as exc:
            self._raise(type(exc).__name__, str(exc))
        except MemoryError:
            self._breach_size('value')

    def _guard_rendering(self, values: Any, what: str) -> None:
        if isinstance(values, (list, tuple, dict)) and text_size_exceeds(values, self.limits.max_value_size):
            self._breach_size(what)

    def _stringify(self, value: Any) -> str:
        self._guard_rendering(value, 'text rendering')
        return self._native(str, value)

    def _each(self, value: Any) -> Iterator[Any]:
        if not isinstance(value, _ITERABLE_TYPES):
            self._raise('TypeError', f"'{type_name(value)}' object is not iterable")
        iterator = iter(value)
        while True:
            try:
                item = next(iterator)
            except StopIteration:
                return
            except RuntimeError as exc:
                # e.g. dict changed size during iteration
                self._raise('RuntimeError', str(exc))
            yield item

    # ------------------------------------------------------------------
    # Statements
    # ------------------------------------------------------------------

    def _exec_block(self, statements: Iterable[ast.stmt], scope: Scope) -> None:
        for statement in statements:
            self._exec(statement, scope)

    def _exec(self, node: ast.stmt, scope: Scope) -> None:
        self._tick()
        self._line = node.lineno
        method = getattr(self, f"exec_{type(node).__name__}", None)
        if method is None:
            raise UnsupportedConstruct(type(node).__name__.lower(), node.lineno, node.col_offset)
        method(node, scope)

    def exec_Expr(self, node: ast.Expr, scope: Scope) -> None:
        self._eval(node.value, scope)

    def exec_Pass(self, node: ast.Pass, scope: Scope) -> None:
        pass

    def exec_Assign(self, node: ast.Assign, scope: Scope) -> None:
        value = self._eval(node.value, scope)
        for target in node.targets:
            self._assign(target, value, scope)

    def exec_AnnAssign(self, node: ast.AnnAssign, scope: Scope) -> None:
        if node.value is not None:
            self._assign(node.target, self._eval(node.value, scope), scope)

    def exec_AugAssign(self, node: ast.AugAssign, scope: Scope) -> None:
        target = node.target
        if isinstance(target, ast.Name):
            current = self._lookup_value(target.id, scope)
            value = self._eval(node.value, scope)
            scope.assign(target.id, self._binop(node.op, current, value))
            return
        container = self._eval(target.value, scope)
        key = self._eval_index(target.slice, scope)
        current = self._subscript(container, key)
        value = self._eval(node.value, scope)
        self._store_item(container, key, self._binop(node.op, current, value))

    def exec_FunctionDef(self, node: ast.FunctionDef, scope: Scope) -> None:
        arguments = node.args
        params = [arg.arg for arg in arguments.posonlyargs + arguments.args]
        defaults = [self._eval(default, scope) for default in arguments.defaults]
        scope.assign(node.name, WorkflowFunction(
            name=node.name,
            params=params,
            defaults=defaults,
            body=node.body,
            closure=scope,
            line=node.lineno,
        ))

    def exec_Return(self, node: ast.Return, scope: Scope) -> None:
        raise ReturnSignal(self._eval(node.value, scope) if node.value is not None else None)

    def exec_Break(self, node: ast.Break, scope: Scope) -> None:
        raise BreakSignal()

    def exec_Continue(self, node: ast.Continue, scope: Scope) -> None:
        raise ContinueSignal()

    def exec_If(self, node: ast.If, scope: Scope) -> None:
        if self._eval(node.test, scope):
            self._exec_block(node.body, scope)
        else:
            self._exec_block(node.orelse, scope)

    def exec_While(self, node: ast.While, scope: Scope) -> None:
        while self._eval(node.test, scope):
            try:
                self._exec_block(node.body, scope)
            except BreakSignal:
                break
            except ContinueSignal:
                continue

    def exec_For(self, node: ast.For, scope: Scope) -> None:
        for item in self._each(self._eval(node.iter, scope)):
            self._assign(node.target, item, scope)
            try:
                self._exec_block(node.body, scope)
            except BreakSignal:
                break
            except ContinueSignal:
                continue

    def exec_Try(self, node: ast.Try, scope: Scope) -> None:
        # Limit breaches skip handlers and finally blocks entirely
        pending: Optional[Exception] = None
        try:
            try:
                self._exec_block(node.body, scope)
            except WorkflowRaise as exc:
                handler = self._match_handler(node.handlers, exc.error)
                if handler is None:
                    raise
                if handler.name:
                    scope.assign(handler.name, exc.error)
                self._exec_block(handler.body, scope)
            else:
                self._exec_block(node.orelse, scope)
        except (WorkflowRaise, ReturnSignal, BreakSignal, ContinueSignal) as signal:
            pending = signal
        self._exec_block(node.finalbody, scope)
        if pending is not None:
            raise pending

    def _match_handler(self, handlers: List[ast.ExceptHandler], error: ErrorValue) -> Optional[ast.ExceptHandler]:
        for handler in handlers:
            self._tick()
            if handler.type is None:
                return handler
            names = handler.type.elts if isinstance(handler.type, ast.Tuple) else [handler.type]
            if any(error.matches(name.id) for name in names):
                return handler
        return None

    # ------------------------------------------------------------------
    # Assignment
    # ------------------------------------------------------------------

    def _assign(self, target: ast.AST, value: Any, scope: Scope) -> None:
        if isinstance(target, ast.Name):
            scope.assign(target.id, value)
        elif isinstance(target, (ast.Tuple, ast.List)):
            items = list(self._each(value))
            expected = len(target.elts)
            if len(items) < expected:
                self._raise('ValueError', f"not enough values to unpack (expected {expected}, got {len(items)})")
            if len(items) > expected:
                self._raise('ValueError', f"too many values to unpack (expected {expected})")
            for element, item in zip(target.elts, items):
                self._assign(element, item, scope)
        elif isinstance(target, ast.Subscript):
            container = self._eval(target.value, scope)
            key = self._eval_index(target.slice, scope)
            self._store_item(container, key, value)
        else:
            raise UnsupportedConstruct(type(target).__name__.lower(), self._line)

    def _store_item(self, container: Any, key: Any, value: Any) -> None:
        if not isinstance(container, (list, dict)):
            self._raise('TypeError', f"'{type_name(container)}' object does not support item assignment")
        self._native(operator.setitem, container, key, value)
        self._check_size(container)

    # ------------------------------------------------------------------
    # Expressions
    # ------------------------------------------------------------------

    def _eval(self, node: ast.expr, scope: Scope) -> Any:
        self._tick()
        method = getattr(self, f"eval_{type(node).__name__}", None)
        if method is None:
            raise UnsupportedConstruct(type(node).__name__.lower(), getattr(node, 'lineno', self._line))
        return method(node, scope)

    def eval_Constant(self, node: ast.Constant, scope: Scope) -> Any:
        return node.value

    def _lookup_value(self, name: str, scope: Scope) -> Any:
        found, value = scope.lookup(name)
        if found:
            if isinstance(value, WorkflowFunction):
                self._raise('TypeError', f"function '{name}' cannot be used as a value")
            return value
        if name in self.table or name in BUILTIN_FUNCTIONS:
            self._raise('TypeError', f"function '{name}' cannot be used as a value")
        self._raise('NameError', f"name '{name}' is not defined")

    def eval_Name(self, node: ast.Name, scope: Scope) -> Any:
        return self._lookup_value(node.id, scope)

    def eval_List(self, node: ast.List, scope: Scope) -> List[Any]:
        return [self._eval(element, scope) for element in node.elts]

    def eval_Tuple(self, node: ast.Tuple, scope: Scope) -> Tuple[Any, ...]:
        return tuple(self._eval(element, scope) for element in node.elts)

    def eval_Dict(self, node: ast.Dict, scope: Scope) -> Dict[Any, Any]:
        result = {}
        for key_node, value_node in zip(node.keys, node.values):
            key = self._eval(key_node, scope)
            value = self._eval(value_node, scope)
            self._native(operator.setitem, result, key, value)
        return result

    def _binop(self, op: ast.operator, left: Any, right: Any) -> Any:
        self._precheck_binop(op, left, right)
        result = self._native(_BINOPS[type(op)], left, right)
        self._check_size(result)
        return result

    def _precheck_binop(self, op: ast.operator, left: Any, right: Any) -> None:
        limit = self.limits.max_value_size
        if isinstance(op, ast.Mult):
            for sequence, count in ((left, right), (right, left)):
                if isinstance(sequence, (str, list, tuple)) and _is_int(count) and len(sequence) * count > limit:
                    self._breach_size('repeated sequence')
            if _is_int(left) and _is_int(right) and left.bit_length() + right.bit_length() > limit:
                self._breach_size('integer product')
        elif isinstance(op, ast.Add):
            if isinstance(left, (str, list, tuple)) and type(left) is type(right) and len(left) + len(right) > limit:
                self._breach_size('concatenation')
        elif isinstance(op, ast.Pow):
            if _is_int(left) and _is_int(right) and right > 0 and abs(left) > 1:
                if abs(left).bit_length() * right > limit:
                    self._breach_size('integer power')
        elif isinstance(op, ast.Mod) and isinstance(left, str):
            operands = right if isinstance(right, tuple) else (right,)
            if exceeds_width(left, limit) or any(_is_int(item) and item > limit for item in operands):
                self._breach_size('printf-style formatting')
            self._guard_rendering(right, 'printf-style formatting')

    def eval_BinOp(self, node: ast.BinOp, scope: Scope) -> Any:
        left = self._eval(node.left, scope)
        right = self._eval(node.right, scope)
        return self._binop(node.op, left, right)

    def eval_UnaryOp(self, node: ast.UnaryOp, scope: Scope) -> Any:
        operand = self._eval(node.operand, scope)
        if isinstance(node.op, ast.Not):
            return not operand
        if isinstance(node.op, ast.USub):
            return self._native(operator.neg, operand)
        return self._native(operator.pos, operand)

    def eval_BoolOp(self, node: ast.BoolOp, scope: Scope) -> Any:
        value = None
        for operand in node.values:
            value = self._eval(operand, scope)
            if isinstance(node.op, ast.And) and not value:
                return value
            if isinstance(node.op, ast.Or) and value:
                return value
        return value

    def eval_Compare(self, node: ast.Compare, scope: Scope) -> bool:
        left = self._eval(node.left, scope)
        for op, comparator in zip(node.ops, node.comparators):
            right = self._eval(comparator, scope)
            if not self._native(_COMPARISONS[type(op)], left, right):
                return False
            left = right
        return True

    def eval_IfExp(self, node: ast.IfExp, scope: Scope) -> Any:
        if self._eval(node.test, scope):
            return self._eval(node.body, scope)
        return self._eval(node.orelse, scope)

    def _eval_index(self, node: ast.AST, scope: Scope) -> Any:
        if isinstance(node, ast.Slice):
            self._tick()
            parts = [self._eval(part, scope) if part is not None else None
                     for part in (node.lower, node.upper, node.step)]
            return slice(*parts)
        return self._eval(node, scope)

    def _subscript(self, container: Any, key: Any) -> Any:
        if not isinstance(container, _ITERABLE_TYPES):
            self._raise('TypeError', f"'{type_name(container)}' object is not subscriptable")
        return self._native(operator.getitem, container, key)

    def eval_Subscript(self, node: ast.Subscript, scope: Scope) -> Any:
        container = self._eval(node.value, scope)
        key = self._eval_index(node.slice, scope)
        return self._subscript(container, key)

    def eval_JoinedStr(self, node: ast.JoinedStr, scope: Scope) -> str:
        parts = []
        for value in node.values:
            if isinstance(value, ast.Constant):
                parts.append(value.value)
            else:
                parts.append(self._eval(value, scope))
        text = ''.join(parts)
        self._check_size(text)
        return text

    def eval_FormattedValue(self, node: ast.FormattedValue, scope: Scope) -> str:
        return self._stringify(self._eval(node.value, scope))

    def _comprehension(self, node, scope: Scope) -> Iterator[Scope]:
        generator = node.generators[0]
        iterable = self._eval(generator.iter, scope)
        local = scope.child()
        for item in self._each(iterable):
            self._assign(generator.target, item, local)
            if all(self._eval(condition, local) for condition in generator.ifs):
                yield local

    def eval_ListComp(self, node: ast.ListComp, scope: Scope) -> List[Any]:
        result = [self._eval(node.elt, local) for local in self._comprehension(node, scope)]
        self._check_size(result)
        return result

    def eval_DictComp(self, node: ast.DictComp, scope: Scope) -> Dict[Any, Any]:
        result = {}
        for local in self._comprehension(node, scope):
            key = self._eval(node.key, local)
            self._native(operator.setitem, result, key, self._eval(node.value, local))
        return result

    # ------------------------------------------------------------------
    # Calls
    # ------------------------------------------------------------------

    def _arguments(self, node: ast.Call, scope: Scope) -> Tuple[List[Any], Dict[str, Any]]:
        args = [self._eval(arg, scope) for arg in node.args]
        kwargs = {keyword.arg: self._eval(keyword.value, scope) for keyword in node.keywords}
        return args, kwargs

    def eval_Call(self, node: ast.Call, scope: Scope) -> Any:
        func = node.func
        if isinstance(func, ast.Attribute):
            receiver = self._eval(func.value, scope)
            if func.attr not in METHOD_WHITELIST.get(type(receiver), ()):
                self._raise('AttributeError', f"'{type_name(receiver)}' object has no attribute '{func.attr}'")
            args, kwargs = self._arguments(node, scope)
            return self._call_method(receiver, func.attr, args, kwargs)

        name = func.id
        found, target = scope.lookup(name)
        if found:
            if not isinstance(target, WorkflowFunction):
                self._raise('TypeError', f"'{type_name(target)}' object is not callable")
            args, kwargs = self._arguments(node, scope)
            return self._call_workflow(target, args, kwargs)
        if name in self.table:
            args, kwargs = self._arguments(node, scope)
            return self._call_host(name, args, kwargs)
        if name in BUILTIN_FUNCTIONS:
            args, kwargs = self._arguments(node, scope)
            return self._call_builtin(name, args, kwargs)
        self._raise('NameError', f"name '{name}' is not defined")

    def _call_workflow(self, function: WorkflowFunction, args: List[Any], kwargs: Dict[str, Any]) -> Any:
        if self._depth >= self.limits.max_call_depth:
            raise LimitBreach('DepthLimitExceeded', f"call depth above {self.limits.max_call_depth}")
        try:
            bound = function.bind(args, kwargs)
        except WorkflowRaise as exc:
            raise WorkflowRaise(exc.error, self._line) from None
        local = Scope(parent=function.closure)
        for name, value in bound.items():
            local.assign(name, value)

        caller_line = self._line
        self._depth += 1
        try:
            self._exec_block(function.body, local)
        except ReturnSignal as signal:
            return signal.value
        finally:
            self._depth -= 1
            self._line = caller_line
        return None

    def _print_arguments(self, args: List[Any], kwargs: Dict[str, Any]) -> Tuple[List[Any], Dict[str, Any]]:
        """print(*values, sep=' ') -> one text argument"""
        kwargs = dict(kwargs)
        separator = kwargs.pop('sep', ' ')
        kwargs.pop('end', None)
        kwargs.pop('flush', None)
        if kwargs:
            self._raise('TypeError', f"'{next(iter(kwargs))}' is an invalid keyword argument for print()")
        if separator is None:
            separator = ' '
        if not isinstance(separator, str):
            self._raise('TypeError', f"sep must be None or a string, not {type_name(separator)}")
        text = separator.join(self._stringify(arg) for arg in args)
        self._check_size(text)
        return [text], {}

    def _is_text_print(self, name: str) -> bool:
        if name != 'print':
            return False
        spec = self.table.lookup(name)
        return spec.arity == 1 and spec.params[0].type == STRING

    def _call_host(self, name: str, args: List[Any], kwargs: Dict[str, Any]) -> Any:
        if self._is_text_print(name):
            args, kwargs = self._print_arguments(args, kwargs)
        host_args = [to_host_value(arg) for arg in args]
        host_kwargs = {key: to_host_value(value) for key, value in kwargs.items()}

        # Argument errors are raised before the call and leave no Call event
        try:
            bound = self.table.bind_arguments(name, host_args, host_kwargs)
            self.table.check_arguments(name, bound)
        except (ArityMismatch, ArgumentTypeMismatch) as exc:
            self._raise('TypeError', str(exc))

        recorded_args = copy.deepcopy(bound)
        logger.debug(f"📞 {name}({', '.join(repr(arg) for arg in bound)})")
        try:
            result = self.table.invoke(name, bound, self.env)
        except (HostError, ReturnTypeMismatch) as exc:
            status = getattr(exc, 'status', None)
            message = getattr(exc, 'message', str(exc)) if isinstance(exc, HostError) else str(exc)
            self._emit(TraceEventKind.CALL, name=name, args=recorded_args,
                       error={'kind': 'HostError', 'message': message, 'status': status})
            self._check_time()
            raise WorkflowRaise(ErrorValue('HostError', str(exc), status), self._line) from None

        self._emit(TraceEventKind.CALL, name=name, args=recorded_args, result=copy.deepcopy(result))
        if name == 'print':
            self._emit(TraceEventKind.OUTPUT, text=bound[0] if bound else '')
        self._check_time()
        return result

    def _call_builtin(self, name: str, args: List[Any], kwargs: Dict[str, Any]) -> Any:
        if name == 'str' and args:
            result = self._stringify(args[0]) if len(args) == 1 and not kwargs else \
                self._native(str, *args, **kwargs)
        else:
            result = self._native(BUILTIN_FUNCTIONS[name], *args, **kwargs)
        self._check_size(result)
        return result

    def _call_method(self, receiver: Any, method: str, args: List[Any], kwargs: Dict[str, Any]) -> Any:
        limit = self.limits.max_value_size
        if method == 'replace' and len(args) >= 2 and isinstance(args[0], str) and isinstance(args[1], str):
            old, new = args[0], args[1]
            occurrences = receiver.count(old) if old else len(receiver) + 1
            if len(receiver) + occurrences * (len(new) - len(old)) > limit:
                self._breach_size('str.replace result')
        elif method == 'join' and args and isinstance(args[0], (list, tuple)):
            pieces = args[0]
            estimated = sum(len(piece) for piece in pieces if isinstance(piece, str))
            if estimated + len(receiver) * len(pieces) > limit:
                self._breach_size('str.join result')
        elif method == 'extend' and args and isinstance(args[0], (str, list, tuple, dict, range)):
            if len(receiver) + len(args[0]) > limit:
                self._breach_size('list.extend result')

        if method == 'format':
            self._guard_rendering([*args, *kwargs.values()], 'str.format arguments')
            result = self._native(SafeFormatter(limit).format, receiver, *args, **kwargs)
        else:
            result = self._native(getattr(receiver, method), *args, **kwargs)
        if method in ('keys', 'items'):
            result = list(result)
        self._check_size(result)
        self._check_size(receiver)
        return result


def execute_workflow(program: WorkflowProgram, table: FunctionTable, env: Any,
                     limits: Optional[ExecLimits] = None, intention_id: Optional[int] = None,
                     observers: Iterable[Observer] = ()) -> ExecutionTrace:
    """
    Выполнить программу и вернуть трассу.

    Args:
        program: результат parse_workflow
        table: замороженный каталог функций
        env: окружение хоста (передаётся первым аргументом в callbacks)
        limits: лимиты (по умолчанию из настроек)
        observers: дополнительные наблюдатели событий
    """
    interpreter = Interpreter(table, env, limits)
    for observer in observers:
        interpreter.attach(observer)
    return interpreter.execute(program, intention_id=intention_id)


def run_workflow_source(source: str, table: FunctionTable, env: Any,
                        limits: Optional[ExecLimits] = None, intention_id: Optional[int] = None,
                        observers: Iterable[Observer] = ()) -> ExecutionTrace:
    """parse + execute; ошибка разбора превращается в трассу parse_rejected"""
    observers = tuple(observers)
    try:
        program = parse_workflow(source)
    except UnsupportedConstruct as exc:
        logger.info(f"🚫 Unsupported construct '{exc.construct}' at line {exc.line}")
        trace = ExecutionTrace.rejected('UnsupportedConstruct', str(exc), intention_id,
                                        construct=exc.construct, line=exc.line)
    except WorkflowSyntaxError as exc:
        logger.info(f"🚫 Syntax error at line {exc.line}: {exc.message}")
        trace = ExecutionTrace.rejected('SyntaxError', exc.message, intention_id, line=exc.line)
    else:
        return execute_workflow(program, table, env, limits, intention_id, observers)

    for observer in observers:
        for event in trace.events:
            observer.update(event.kind.value, event)
    return trace
