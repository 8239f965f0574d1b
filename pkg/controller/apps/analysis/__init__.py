"""
Анализ ответа модели: блок кода, преамбула/постамбула, комментарии
"""
