"""
Сопоставление выражений с путями файлов и контактами.

Сравнение без учёта регистра; '_', '-' и пробелы считаются одним
разделителем. '', '*' и '.' совпадают со всем; выражения с символами
glob сравниваются по правилам fnmatch.
"""

import fnmatch
import re

_SEPARATORS_RE = re.compile(r'[\s_\-]+')
GLOB_CHARACTERS = frozenset('*?[')
MATCH_ALL = frozenset({'', '*', '.'})


def normalize(text: str) -> str:
    return _SEPARATORS_RE.sub(' ', (text or '').lower()).strip()


def matches(expression: str, candidate: str) -> bool:
    stripped = (expression or '').strip()
    if stripped in MATCH_ALL:
        return True
    if GLOB_CHARACTERS & set(stripped):
        return fnmatch.fnmatchcase(normalize(candidate), normalize(stripped))
    return normalize(stripped) in normalize(candidate)
