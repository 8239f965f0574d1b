"""
Comment detection over workflow source using the Python tokenizer.

A comment token is a COMMENT or a docstring (a string literal standing
alone as a statement). '#' inside string literals is never a comment.
When the tokenizer cannot process the input, detection falls back to a
substring scan and says so in `provenance`.
"""

import io
import tokenize
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from .exceptions import WorkflowLexError

DOCSTRING = 'DOCSTRING'

_LAYOUT = {tokenize.NL, tokenize.COMMENT, tokenize.INDENT, tokenize.DEDENT, tokenize.ENCODING}
_STATEMENT_END = {tokenize.NEWLINE, tokenize.ENDMARKER}


class CommentProvenance(str, Enum):
    LEXICAL = 'lexical'
    SUBSTRING = 'substring'


@dataclass(frozen=True)
class WorkflowToken:
    kind: str
    text: str
    start: Tuple[int, int]


@dataclass(frozen=True)
class CommentScan:
    has_comments: bool
    count: int
    provenance: CommentProvenance


def _raw_tokens(code: str) -> List[tokenize.TokenInfo]:
    tokens = []
    try:
        for token in tokenize.generate_tokens(io.StringIO(code).readline):
            # Unterminated quotes come back as ERRORTOKEN instead of raising
            if token.type == tokenize.ERRORTOKEN and token.string.strip():
                raise WorkflowLexError(f"unrecognized token {token.string!r}", token.start[0])
            tokens.append(token)
    except SyntaxError as exc:
        raise WorkflowLexError(exc.msg, exc.lineno or 0) from exc
    except tokenize.TokenError as exc:
        position = exc.args[1] if len(exc.args) > 1 else (0, 0)
        raise WorkflowLexError(str(exc.args[0]), position[0]) from exc
    return tokens


def _docstring_positions(tokens: List[tokenize.TokenInfo]) -> set:
    """Indexes of STRING tokens forming a statement of their own"""
    positions = set()
    index = 0
    at_statement_start = True
    while index < len(tokens):
        token = tokens[index]
        if token.type in _LAYOUT:
            index += 1
            continue
        if at_statement_start and token.type == tokenize.STRING:
            run_end = index
            while run_end + 1 < len(tokens) and tokens[run_end + 1].type in (tokenize.STRING, tokenize.NL):
                run_end += 1
            following = run_end + 1
            while following < len(tokens) and tokens[following].type == tokenize.COMMENT:
                following += 1
            if following >= len(tokens) or tokens[following].type in _STATEMENT_END:
                positions.update(
                    i for i in range(index, run_end + 1) if tokens[i].type == tokenize.STRING
                )
            index = run_end + 1
            at_statement_start = False
            continue
        at_statement_start = token.type == tokenize.NEWLINE or (
            token.type == tokenize.OP and token.string == ':' and _ends_line(tokens, index)
        )
        index += 1
    return positions


def _ends_line(tokens: List[tokenize.TokenInfo], index: int) -> bool:
    following = index + 1
    while following < len(tokens) and tokens[following].type == tokenize.COMMENT:
        following += 1
    return following < len(tokens) and tokens[following].type in (tokenize.NEWLINE, tokenize.NL)


def lex_workflow(code: str) -> List[WorkflowToken]:
    """Токены workflow; строковые операторы-литералы помечены как DOCSTRING"""
    tokens = _raw_tokens(code)
    docstrings = _docstring_positions(tokens)
    return [
        WorkflowToken(
            kind=DOCSTRING if index in docstrings else tokenize.tok_name[token.type],
            text=token.string,
            start=token.start,
        )
        for index, token in enumerate(tokens)
    ]


def scan_comments(code: str) -> CommentScan:
    if not code:
        return CommentScan(False, 0, CommentProvenance.LEXICAL)
    try:
        tokens = lex_workflow(code)
    except WorkflowLexError:
        found = '#' in code
        return CommentScan(found, code.count('#'), CommentProvenance.SUBSTRING)
    count = sum(1 for token in tokens if token.kind in ('COMMENT', DOCSTRING))
    return CommentScan(count > 0, count, CommentProvenance.LEXICAL)


def detect_comments(code: str) -> bool:
    return scan_comments(code).has_comments
