"""
Исключения разбора workflow.

Ошибки выполнения сюда не входят: они никогда не покидают
execute_workflow и попадают в трассу как события Error.
"""


class WorkflowError(Exception):
    """Базовое исключение интерпретатора"""
    pass


class WorkflowSyntaxError(WorkflowError):
    """Исходный код не является корректным Python"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class UnsupportedConstruct(WorkflowError):
    """Корректный Python вне поддерживаемого подмножества"""

    def __init__(self, construct: str, line: int = 0, column: int = 0):
        self.construct = construct
        self.line = line
        self.column = column
        super().__init__(f"Unsupported construct '{construct}' at line {line}")
