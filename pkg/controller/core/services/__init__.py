"""
Общие сервисы (часы)
"""
