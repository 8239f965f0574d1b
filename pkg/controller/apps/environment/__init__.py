"""
Окружение хоста: детерминированные реализации 16 стандартных функций
"""
