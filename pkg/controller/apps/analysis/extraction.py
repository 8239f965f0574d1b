"""
Извлечение кода из ответа модели.

Блок - тройные обратные кавычки в начале строки с необязательной меткой языка.
Если блоков несколько, код склеивается через перевод строки;
преамбула - текст до первого блока, постамбула - после последнего.
"""

import re
from dataclasses import dataclass
from typing import Optional

from .comments import CommentProvenance, scan_comments
from .exceptions import NoCodeBlock

FENCE_RE = re.compile(
    r'^(?P<open>[ \t]{0,3}```(?P<label>[^\n`]*)\n)(?P<code>.*?)(?P<close>(?<=\n)[ \t]{0,3}```|\n[ \t]{0,3}```)',
    re.DOTALL | re.MULTILINE,
)


@dataclass(frozen=True)
class ParsedResponse:
    code: str
    preamble: str
    postamble: str
    has_preamble: bool
    has_postamble: bool
    has_comments: bool
    fence_label: Optional[str]
    opening_fence: str = '```\n'
    closing_fence: str = '\n```'
    block_count: int = 1
    raw_text: str = ''
    comment_provenance: CommentProvenance = CommentProvenance.LEXICAL

    @property
    def has_prose(self) -> bool:
        """Преамбула или постамбула"""
        return self.has_preamble or self.has_postamble

    def reconstruct(self) -> str:
        """Точное восстановление исходного текста (для одного блока)"""
        return f"{self.preamble}{self.opening_fence}{self.code}{self.closing_fence}{self.postamble}"


def extract_code(response_text: str) -> ParsedResponse:
    blocks = list(FENCE_RE.finditer(response_text or ''))
    if not blocks:
        raise NoCodeBlock(response_text or '')

    first, last = blocks[0], blocks[-1]
    code = '\n'.join(block.group('code') for block in blocks)
    preamble = response_text[:first.start()]
    postamble = response_text[last.end():]
    label = first.group('label').strip()
    scan = scan_comments(code)

    return ParsedResponse(
        code=code,
        preamble=preamble,
        postamble=postamble,
        has_preamble=bool(preamble.strip()),
        has_postamble=bool(postamble.strip()),
        has_comments=scan.has_comments,
        fence_label=label or None,
        opening_fence=first.group('open'),
        closing_fence=first.group('close'),
        block_count=len(blocks),
        raw_text=response_text,
        comment_provenance=scan.provenance,
    )
