"""
Function Table: типизированный каталог функций хоста
"""
