"""
Общие исключения проекта
"""


class ConfigurationError(ValueError):
    """Ошибка конфигурации оператора (неверный флаг, файл, модель)"""
    pass
