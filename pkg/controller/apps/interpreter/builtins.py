"""
Builtin whitelist of the workflow language.

Functions: len, range, str, int, float.
Value methods: see METHOD_WHITELIST. Everything else fails loudly.
"""

import re
import string
from typing import Any, Dict

BUILTIN_FUNCTIONS: Dict[str, Any] = {
    'len': len,
    'range': range,
    'str': str,
    'int': int,
    'float': float,
}

METHOD_WHITELIST = {
    str: frozenset({'split', 'join', 'strip', 'lower', 'upper', 'startswith', 'endswith', 'replace', 'format'}),
    list: frozenset({'append', 'extend'}),
    dict: frozenset({'get', 'keys', 'items'}),
}

ALL_METHOD_NAMES = frozenset().union(*METHOD_WHITELIST.values())

_NUMBER_RE = re.compile(r'\d+')


class SafeFormatter(string.Formatter):
    """
    str.format без доступа к атрибутам и индексам в полях
    и с ограничением ширины полей.
    """

    def __init__(self, max_width: int):
        super().__init__()
        self.max_width = max_width

    def get_field(self, field_name, args, kwargs):
        if '.' in field_name or '[' in field_name:
            raise ValueError(f"field {field_name!r}: attribute and index access is not supported")
        return super().get_field(field_name, args, kwargs)

    def format_field(self, value, format_spec):
        if exceeds_width(format_spec, self.max_width):
            raise OverflowError(f"format width in {format_spec!r} is too large")
        return super().format_field(value, format_spec)

    def convert_field(self, value, conversion):
        if conversion not in (None, 's'):
            raise ValueError(f"conversion !{conversion} is not supported")
        return super().convert_field(value, conversion)


def exceeds_width(spec: str, limit: int) -> bool:
    return any(int(number) > limit for number in _NUMBER_RE.findall(spec or ''))


def text_size_exceeds(value: Any, limit: int) -> bool:
    """
    Оценка длины str(value) без построения строки.

    Обход явным стеком; циклические ссылки считаются как '[...]'.
    """
    total = 0
    on_path = set()
    stack = [(value, False)]
    while stack:
        item, leaving = stack.pop()
        if leaving:
            on_path.discard(id(item))
            continue
        if isinstance(item, str):
            total += len(item) + 2
        elif isinstance(item, (list, tuple, dict)):
            if id(item) in on_path:
                total += 5
                continue
            children = [part for pair in item.items() for part in pair] if isinstance(item, dict) else list(item)
            total += 2 + 2 * len(children)
            if total > limit:
                return True
            on_path.add(id(item))
            stack.append((item, True))
            stack.extend((child, False) for child in children)
        elif isinstance(item, int) and not isinstance(item, bool):
            total += item.bit_length() // 3 + 2
        else:
            total += 24
        if total > limit:
            return True
    return False
