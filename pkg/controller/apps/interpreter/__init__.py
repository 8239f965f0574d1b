"""
Executor: песочница для workflow-кода с полной трассировкой
"""
