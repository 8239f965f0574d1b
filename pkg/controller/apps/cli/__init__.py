"""
Командная строка: resolve, bench, report, docs
"""
