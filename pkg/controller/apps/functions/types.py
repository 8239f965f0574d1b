"""
Semantic types of the function catalog.

Surface grammar (exactly the forms the catalog uses):

    type   := atom ('|' atom)*
    atom   := 'String' | 'Integer' | 'Float' | 'Boolean' | 'void' | 'null'
            | 'Collection' '<' type '>'
            | 'Dictionary' '<' type ',' type '>'

Runtime values (HostValue) are plain Python objects: None, bool, int,
float, str, list and dict with str keys.
"""

import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, List, Tuple

from .exceptions import MalformedType


class TypeKind(str, Enum):
    """Вид семантического типа"""
    STRING = 'String'
    INTEGER = 'Integer'
    FLOAT = 'Float'
    BOOLEAN = 'Boolean'
    VOID = 'void'
    NULL = 'null'
    COLLECTION = 'Collection'
    DICTIONARY = 'Dictionary'
    UNION = 'Union'


PRIMITIVE_KINDS = (
    TypeKind.STRING,
    TypeKind.INTEGER,
    TypeKind.FLOAT,
    TypeKind.BOOLEAN,
    TypeKind.VOID,
    TypeKind.NULL,
)

_BASE_NAMES = {kind.value: kind for kind in PRIMITIVE_KINDS}


@dataclass(frozen=True)
class SemanticType:
    """
    Immutable, structurally compared type.

    args holds the element type of a Collection, (key, value) of a
    Dictionary, or the ordered members of a Union.
    """
    kind: TypeKind
    args: Tuple['SemanticType', ...] = ()

    @classmethod
    def collection(cls, element: 'SemanticType') -> 'SemanticType':
        return cls(TypeKind.COLLECTION, (element,))

    @classmethod
    def dictionary(cls, key: 'SemanticType', value: 'SemanticType') -> 'SemanticType':
        return cls(TypeKind.DICTIONARY, (key, value))

    @classmethod
    def union(cls, *members: 'SemanticType') -> 'SemanticType':
        """Flattened, order-preserving union; one distinct member collapses to it"""
        flat: List[SemanticType] = []
        for member in members:
            nested = member.args if member.kind == TypeKind.UNION else (member,)
            for item in nested:
                if item not in flat:
                    flat.append(item)
        if not flat:
            raise ValueError("a union needs at least one member")
        if len(flat) == 1:
            return flat[0]
        return cls(TypeKind.UNION, tuple(flat))

    @property
    def element(self) -> 'SemanticType':
        return self.args[0]

    @property
    def key(self) -> 'SemanticType':
        return self.args[0]

    @property
    def value(self) -> 'SemanticType':
        return self.args[1]

    @property
    def members(self) -> Tuple['SemanticType', ...]:
        return self.args if self.kind == TypeKind.UNION else (self,)

    @property
    def is_void(self) -> bool:
        return self.kind == TypeKind.VOID

    def contains_void(self) -> bool:
        if self.kind == TypeKind.VOID:
            return True
        return any(arg.contains_void() for arg in self.args)

    def accepts_null(self) -> bool:
        return any(member.kind in (TypeKind.NULL, TypeKind.VOID) for member in self.members)

    def __str__(self) -> str:
        return render_type(self)


STRING = SemanticType(TypeKind.STRING)
INTEGER = SemanticType(TypeKind.INTEGER)
FLOAT = SemanticType(TypeKind.FLOAT)
BOOLEAN = SemanticType(TypeKind.BOOLEAN)
VOID = SemanticType(TypeKind.VOID)
NULL = SemanticType(TypeKind.NULL)


def render_type(semantic_type: SemanticType) -> str:
    """Canonical surface form; parse_type(render_type(t)) == t"""
    kind = semantic_type.kind
    if kind in PRIMITIVE_KINDS:
        return kind.value
    if kind == TypeKind.COLLECTION:
        return f"Collection<{render_type(semantic_type.element)}>"
    if kind == TypeKind.DICTIONARY:
        return f"Dictionary<{render_type(semantic_type.key)}, {render_type(semantic_type.value)}>"
    return '|'.join(render_type(member) for member in semantic_type.args)


# ---------------------------------------------------------------------------
# Parser (recursive descent)
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r'\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[<>,|]))')


def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == '':
            break
        match = _TOKEN_RE.match(text, position)
        if match is None:
            column = position + (len(text[position:]) - len(text[position:].lstrip()))
            raise MalformedType(text, f"unexpected character {text[column]!r}", column)
        token = match.group('name') or match.group('punct')
        tokens.append((token, match.start(match.lastgroup)))
        position = match.end()
    return tokens


class _TypeParser:

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def _peek(self) -> str:
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return ''

    def _column(self) -> int:
        if self.index < len(self.tokens):
            return self.tokens[self.index][1]
        return len(self.text)

    def _expect(self, token: str) -> None:
        if self._peek() != token:
            found = self._peek() or 'end of input'
            raise MalformedType(self.text, f"expected {token!r}, found {found!r}", self._column())
        self.index += 1

    def parse(self) -> SemanticType:
        if not self.tokens:
            raise MalformedType(self.text, "empty type")
        result = self._union(top_level=True)
        if self.index != len(self.tokens):
            raise MalformedType(self.text, f"unexpected {self._peek()!r}", self._column())
        return result

    def _union(self, top_level: bool = False) -> SemanticType:
        members = [self._atom()]
        while self._peek() == '|':
            self.index += 1
            members.append(self._atom())
        if len(members) > 1 and any(member.is_void for member in members):
            raise MalformedType(self.text, "void cannot be part of a union")
        if not top_level and any(member.is_void for member in members):
            raise MalformedType(self.text, "void is only valid as a return type")
        return SemanticType.union(*members)

    def _atom(self) -> SemanticType:
        token = self._peek()
        column = self._column()
        if token in ('', '|', '<', '>', ','):
            reason = "empty union arm" if token in ('', '|', '>', ',') else f"unexpected {token!r}"
            raise MalformedType(self.text, reason, column)
        self.index += 1
        if token in _BASE_NAMES:
            return SemanticType(_BASE_NAMES[token])
        if token == 'Collection':
            self._expect('<')
            element = self._union()
            self._expect('>')
            return SemanticType.collection(element)
        if token == 'Dictionary':
            self._expect('<')
            key = self._union()
            self._expect(',')
            value = self._union()
            self._expect('>')
            return SemanticType.dictionary(key, value)
        raise MalformedType(self.text, f"unknown base name {token!r}", column)


def parse_type(text: str) -> SemanticType:
    """
    Разобрать строку типа каталога.

    >>> render_type(parse_type('Integer|null'))
    'Integer|null'
    """
    if text is None or not text.strip():
        raise MalformedType(text or '', "empty type")
    return _TypeParser(text).parse()


# ---------------------------------------------------------------------------
# Structural checker
# ---------------------------------------------------------------------------

def check_value(value: Any, semantic_type: SemanticType) -> bool:
    """True iff value is a HostValue of the given type"""
    kind = semantic_type.kind
    if kind == TypeKind.STRING:
        return isinstance(value, str)
    if kind == TypeKind.BOOLEAN:
        return isinstance(value, bool)
    if kind == TypeKind.INTEGER:
        return isinstance(value, int) and not isinstance(value, bool)
    if kind == TypeKind.FLOAT:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    if kind in (TypeKind.NULL, TypeKind.VOID):
        return value is None
    if kind == TypeKind.COLLECTION:
        return isinstance(value, list) and all(check_value(item, semantic_type.element) for item in value)
    if kind == TypeKind.DICTIONARY:
        return isinstance(value, dict) and all(
            check_value(k, semantic_type.key) and check_value(v, semantic_type.value)
            for k, v in value.items()
        )
    return any(check_value(value, member) for member in semantic_type.args)


def describe_value(value: Any) -> str:
    """Имя типа значения для сообщений об ошибках"""
    if value is None:
        return 'null'
    if isinstance(value, bool):
        return 'Boolean'
    if isinstance(value, int):
        return 'Integer'
    if isinstance(value, float):
        return 'Float'
    if isinstance(value, str):
        return 'String'
    if isinstance(value, list):
        return 'Collection'
    if isinstance(value, dict):
        return 'Dictionary'
    return type(value).__name__


def iter_types(semantic_type: SemanticType) -> Iterable[SemanticType]:
    yield semantic_type
    for arg in semantic_type.args:
        yield from iter_types(arg)
