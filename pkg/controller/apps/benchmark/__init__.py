"""
Бенчмарк: матрица (модель x намерение), классификация и отчёты
"""
