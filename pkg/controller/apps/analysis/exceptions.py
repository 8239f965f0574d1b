"""
Исключения анализа ответа
"""


class AnalysisError(Exception):
    """Базовое исключение анализа ответа"""
    pass


class NoCodeBlock(AnalysisError):
    """
    В ответе нет корректного блока ```...```.

    Это результат классификации, а не сбой: raw_text сохраняется для разбора.
    """

    def __init__(self, raw_text: str):
        self.raw_text = raw_text
        preview = ' '.join(raw_text.split())[:60]
        super().__init__(f"No well-formed fenced code block in response: {preview!r}")


class WorkflowLexError(AnalysisError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)
