"""
Prompt Formatter: роль и пользовательский промпт из каталога и намерения
"""
