"""
Исключения каталога функций
"""

from typing import Optional


class FunctionTableError(Exception):
    """Базовое исключение каталога функций"""
    pass


class MalformedType(FunctionTableError, ValueError):
    """Строка типа не соответствует грамматике каталога"""

    def __init__(self, text: str, reason: str, position: Optional[int] = None):
        self.text = text
        self.reason = reason
        self.position = position
        where = f" at column {position}" if position is not None else ""
        super().__init__(f"Malformed type {text!r}{where}: {reason}")


class MalformedSignature(MalformedType):
    """Строка сигнатуры не разбирается"""
    pass


class InvalidParameter(FunctionTableError, ValueError):
    """Недопустимый параметр (void, повтор имени, неверный идентификатор)"""
    pass


class DuplicateName(FunctionTableError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Function {name!r} is already registered")


class TableFrozen(FunctionTableError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Cannot register {name!r}: table is frozen")


class TableNotFrozen(FunctionTableError):
    def __init__(self):
        super().__init__("Function table must be frozen before invocation")


class UnknownFunction(FunctionTableError):
    """Сгенерированный код ссылается на функцию вне каталога"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown function {name!r}")


class ArityMismatch(FunctionTableError):
    def __init__(self, name: str, expected: int, got: int, detail: str = ''):
        self.name = name
        self.expected = expected
        self.got = got
        message = f"{name}() takes {expected} argument(s) but {got} were given"
        if detail:
            message = f"{name}(): {detail}"
        super().__init__(message)


class ArgumentTypeMismatch(FunctionTableError):
    def __init__(self, name: str, param: str, expected: str, got: str):
        self.name = name
        self.param = param
        self.expected = expected
        self.got = got
        super().__init__(f"{name}(): argument {param!r} expects {expected}, got {got}")


class ReturnTypeMismatch(FunctionTableError):
    def __init__(self, name: str, expected: str, got: str):
        self.name = name
        self.expected = expected
        self.got = got
        super().__init__(f"{name}() must return {expected}, returned {got}")


class HostError(FunctionTableError):
    """
    Ошибка внутри реализации функции хоста.

    status - необязательный числовой код (HTTP-статус, код возврата shell).
    """

    def __init__(self, message: str, status: Optional[int] = None):
        self.message = message
        self.status = status
        super().__init__(message)

    def __str__(self) -> str:
        if self.status is not None:
            return f"{self.status} {self.message}"
        return self.message
