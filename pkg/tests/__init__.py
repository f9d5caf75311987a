"""
Тесты для BELE IQA
"""
