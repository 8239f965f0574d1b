"""
Function specs and their one-line signature form:

    function <name>(<param>: <Type>, ...): <ReturnType> [# doc]
"""

import keyword
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from .exceptions import InvalidParameter, MalformedSignature, MalformedType
from .types import VOID, SemanticType, parse_type, render_type

_IDENTIFIER_RE = re.compile(r'^[A-Za-z_][A-Za-z0-9_]*$')
_SIGNATURE_RE = re.compile(
    r'^\s*function\s+(?P<name>\S+?)\s*\((?P<params>.*)\)\s*:\s*(?P<ret>[^#]*?)\s*(?:#\s?(?P<doc>.*?))?\s*$'
)


class FunctionKind(str, Enum):
    """Заглушка или реальная интеграция"""
    STUB = 'stub'
    REAL = 'real'


def is_identifier(name: str) -> bool:
    return bool(name) and bool(_IDENTIFIER_RE.match(name)) and not keyword.iskeyword(name)


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type: SemanticType

    def __post_init__(self):
        if not is_identifier(self.name):
            raise InvalidParameter(f"invalid parameter name {self.name!r}")
        if self.type.contains_void():
            raise InvalidParameter(f"parameter {self.name!r} cannot be void")


@dataclass(frozen=True)
class FunctionSpec:
    """
    Спецификация функции каталога.

    doc - необязательное краткое описание; при рендеринге добавляется
    комментарием в конец строки сигнатуры.
    """
    name: str
    params: Tuple[ParamSpec, ...] = ()
    return_type: SemanticType = VOID
    doc: Optional[str] = None
    kind: FunctionKind = FunctionKind.STUB

    def __post_init__(self):
        if not is_identifier(self.name):
            raise InvalidParameter(f"invalid function name {self.name!r}")
        object.__setattr__(self, 'params', tuple(self.params))
        seen = set()
        for param in self.params:
            if param.name in seen:
                raise InvalidParameter(f"duplicate parameter {param.name!r} in {self.name}")
            seen.add(param.name)
        if not self.return_type.is_void and self.return_type.contains_void():
            raise InvalidParameter(f"void is only valid as the whole return type of {self.name}")
        if self.doc is not None:
            # Single line, collapsed whitespace
            doc = ' '.join(self.doc.split())
            object.__setattr__(self, 'doc', doc or None)

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def param_names(self) -> List[str]:
        return [param.name for param in self.params]


def render_signature(spec: FunctionSpec) -> str:
    params = ', '.join(f"{param.name}: {render_type(param.type)}" for param in spec.params)
    line = f"function {spec.name}({params}): {render_type(spec.return_type)}"
    if spec.doc:
        line = f"{line} # {spec.doc}"
    return line


def _split_top_level(text: str) -> List[str]:
    """Split on commas outside angle brackets"""
    parts, depth, current = [], 0, []
    for char in text:
        if char == '<':
            depth += 1
        elif char == '>':
            depth -= 1
        if char == ',' and depth == 0:
            parts.append(''.join(current))
            current = []
        else:
            current.append(char)
    parts.append(''.join(current))
    return parts


def parse_signature(line: str, kind: FunctionKind = FunctionKind.STUB) -> FunctionSpec:
    """Inverse of render_signature"""
    match = _SIGNATURE_RE.match(line or '')
    if match is None:
        raise MalformedSignature(line or '', "expected 'function <name>(<params>): <Type>'")

    params = []
    raw_params = match.group('params').strip()
    if raw_params:
        for chunk in _split_top_level(raw_params):
            name, sep, type_text = chunk.partition(':')
            if not sep:
                raise MalformedSignature(line, f"parameter {chunk.strip()!r} lacks a type")
            try:
                param_type = parse_type(type_text)
            except MalformedType as exc:
                raise MalformedSignature(line, exc.reason) from exc
            params.append(ParamSpec(name.strip(), param_type))

    try:
        return_type = parse_type(match.group('ret'))
    except MalformedType as exc:
        raise MalformedSignature(line, exc.reason) from exc

    return FunctionSpec(
        name=match.group('name'),
        params=tuple(params),
        return_type=return_type,
        doc=match.group('doc') or None,
        kind=kind,
    )
