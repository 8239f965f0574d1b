"""
Тесты анализа ответа: извлечение блока кода и обнаружение комментариев
"""

import pytest
from faker import Faker

from apps.analysis.comments import (
    DOCSTRING,
    CommentProvenance,
    detect_comments,
    lex_workflow,
    scan_comments,
)
from apps.analysis.exceptions import NoCodeBlock
from apps.analysis.extraction import extract_code

CORPUS_SIZE = 120

PLAIN_STATEMENTS = [
    'sleep(5)',
    'print("Done")',
    'print("#1 in the charts")',
    "print('Issue #42 closed')",
    'url = "https://en.wikipedia.org/wiki/Transformer#History"',
    'temperature = get_temperature()',
    'print(f"It is {temperature} degrees")',
    'files = find_files("car title")',
    'answer = query_llm("What is the largest city in Germany?")',
    'tag = "#" + str(len(files))',
    'value = generate_random_number(1, 101)',
    'text = """multi\nline # not a comment\n"""\nprint(text)',
    'items = ["#a", "#b"]',
]

COMMENTS = [
    '# Sleep for five seconds',
    '# TODO: handle errors',
    '#no space comment',
    '# Step 1: find the file',
]

DOCSTRINGS = [
    '"""Resolve the intention."""',
    "'''Play every audio file.'''",
    '"Single quoted docstring"',
]


def random_code(rng, commented):
    """Случайная программа; комментарий вставляется в случайное место"""
    lines = rng.sample(PLAIN_STATEMENTS, rng.randint(2, 5))
    if commented:
        style = rng.choice(['line', 'trailing', 'docstring', 'function-docstring'])
        if style == 'line':
            lines.insert(rng.randint(0, len(lines)), rng.choice(COMMENTS))
        elif style == 'trailing':
            index = rng.randrange(len(lines))
            lines[index] = f"{lines[index]}  {rng.choice(COMMENTS)}"
        elif style == 'docstring':
            lines.insert(0, rng.choice(DOCSTRINGS))
        else:
            lines = ['def main():', f"    {rng.choice(DOCSTRINGS)}", '    sleep(1)', 'main()'] + lines
    return '\n'.join(lines)


@pytest.mark.unit
class TestExtractCode:
    """Тесты извлечения блока кода"""

    def test_single_block(self):
        """Тест ответа из одного блока"""
        parsed = extract_code('```python\nsleep(5)\n```')
        assert parsed.code == 'sleep(5)'
        assert parsed.fence_label == 'python'
        assert not parsed.has_preamble
        assert not parsed.has_postamble
        assert not parsed.has_comments

    def test_unlabelled_block(self):
        """Тест блока без метки языка"""
        parsed = extract_code('```\nprint("hi")\n```')
        assert parsed.fence_label is None
        assert parsed.code == 'print("hi")'

    def test_preamble_and_postamble(self):
        """Тест текста до и после блока"""
        text = 'Here is the code:\n\n```python\nsleep(5)\n```\n\nThis pauses for five seconds.'
        parsed = extract_code(text)
        assert parsed.has_preamble and parsed.has_postamble
        assert parsed.has_prose
        assert parsed.preamble == 'Here is the code:\n\n'
        assert parsed.reconstruct() == text

    def test_whitespace_is_not_prose(self):
        """Тест: пробельные символы вокруг блока не считаются прозой"""
        parsed = extract_code('\n  ```python\nsleep(5)\n```\n\n')
        assert not parsed.has_preamble
        assert not parsed.has_postamble

    def test_multiple_blocks_are_joined(self):
        """Тест склейки нескольких блоков"""
        parsed = extract_code('First:\n```python\nsleep(1)\n```\nthen:\n```python\nsleep(2)\n```\nend')
        assert parsed.block_count == 2
        assert parsed.code == 'sleep(1)\nsleep(2)'
        assert parsed.preamble == 'First:\n'
        assert parsed.postamble == '\nend'

    def test_inline_backticks_in_prose(self):
        """Тест: тройные кавычки внутри строки прозы не открывают блок"""
        text = 'Wrap code in ``` like this:\n```python\nsleep(5)\n```'
        parsed = extract_code(text)
        assert parsed.code == 'sleep(5)'
        assert parsed.preamble == 'Wrap code in ``` like this:\n'
        assert parsed.reconstruct() == text

    def test_inline_backticks_in_code(self):
        """Тест: кавычки в середине строки кода не закрывают блок"""
        parsed = extract_code('```python\nprint("```")\nsleep(1)\n```')
        assert parsed.code == 'print("```")\nsleep(1)'

    @pytest.mark.parametrize('text', [
        '',
        'sleep(5)',
        'I cannot help with that.',
        '```python\nsleep(5)',
        '<|assistant|>\nsleep(5)',
        '```sleep(5)```',
    ])
    def test_no_code_block(self, text):
        """Тест ответов без корректного блока"""
        with pytest.raises(NoCodeBlock) as exc_info:
            extract_code(text)
        assert exc_info.value.raw_text == text

    def test_reconstruct_random_responses(self, faker):
        """Тест точного восстановления исходного ответа"""
        for _ in range(200):
            preamble = faker.paragraph() + '\n' if faker.pybool() else ''
            postamble = '\n' + faker.paragraph() if faker.pybool() else ''
            label = faker.random_element(['python', 'py', '', 'python3'])
            code = '\n'.join(faker.sentences(faker.random_int(1, 4))).replace('`', '')
            text = f"{preamble}```{label}\n{code}\n```{postamble}"
            parsed = extract_code(text)
            assert parsed.code == code
            assert parsed.reconstruct() == text
            assert parsed.has_preamble is bool(preamble)
            assert parsed.has_postamble is bool(postamble)


@pytest.mark.unit
class TestCommentDetection:
    """Тесты обнаружения комментариев"""

    @pytest.mark.parametrize('code,expected', [
        ('sleep(5)', False),
        ('sleep(5)  # wait', True),
        ('# wait\nsleep(5)', True),
        ('print("# not a comment")', False),
        ("print('#hashtag')", False),
        ('"""Docstring."""\nsleep(5)', True),
        ('def f():\n    """Doc."""\n    sleep(5)\nf()', True),
        ('text = """# inside"""', False),
        ('print("a" "b")', False),
        ('"abc".upper()', False),
        ('', False),
    ])
    def test_detect(self, code, expected):
        """Тест отдельных случаев"""
        assert detect_comments(code) is expected

    def test_lexical_provenance(self):
        """Тест: токенизатор используется, когда код разбирается"""
        scan = scan_comments('sleep(5)  # wait\n# more')
        assert scan.provenance == CommentProvenance.LEXICAL
        assert scan.count == 2

    def test_substring_fallback(self):
        """Тест: при ошибке токенизации - поиск подстроки"""
        scan = scan_comments('print("unterminated  # wait')
        assert scan.provenance == CommentProvenance.SUBSTRING
        assert scan.has_comments

    def test_docstring_tokens(self):
        """Тест пометки строк-операторов как DOCSTRING"""
        tokens = lex_workflow('"""Doc."""\nx = "value"\n')
        kinds = {token.text: token.kind for token in tokens}
        assert kinds['"""Doc."""'] == DOCSTRING
        assert kinds['"value"'] == 'STRING'

    @pytest.mark.properties
    def test_random_corpus(self):
        """Тест на корпусе из 120 случайных программ"""
        fake = Faker()
        fake.seed_instance(7)
        rng = fake.random
        for index in range(CORPUS_SIZE):
            commented = index % 2 == 0
            code = random_code(rng, commented)
            scan = scan_comments(code)
            assert scan.provenance == CommentProvenance.LEXICAL, code
            assert scan.has_comments is commented, code

    def test_extract_reports_comments(self):
        """Тест: extract_code передаёт результат обнаружения"""
        parsed = extract_code('```python\n# Sleep\nsleep(5)\n```')
        assert parsed.has_comments
        assert parsed.comment_provenance == CommentProvenance.LEXICAL
