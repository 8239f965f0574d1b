"""
Тесты песочницы: сравнение с эталонным Python, детерминизм, враждебные программы
"""

import pytest
from faker import Faker

from apps.analysis.exceptions import NoCodeBlock
from apps.analysis.extraction import extract_code
from apps.interpreter.exceptions import UnsupportedConstruct, WorkflowSyntaxError
from apps.interpreter.limits import ExecLimits
from apps.interpreter.parser import parse_workflow
from apps.interpreter.trace import ExecutionStatus

DIFFERENTIAL_PROGRAMS = 120


def random_condition(rng, names):
    op = rng.choice(['<', '<=', '>', '>=', '==', '!='])
    return f"{rng.choice(names)} {op} {rng.randint(-5, 5)}"


def random_expression(rng, names, depth=0):
    """Целочисленное выражение без деления на ноль"""
    roll = rng.random()
    if depth >= 2 or roll < 0.35:
        return rng.choice(names) if rng.random() < 0.6 else str(rng.randint(-9, 9))
    left = random_expression(rng, names, depth + 1)
    if roll < 0.75:
        return f"({left} {rng.choice(['+', '-', '*'])} {random_expression(rng, names, depth + 1)})"
    if roll < 0.9:
        return f"({left} {rng.choice(['//', '%'])} {rng.randint(1, 7)})"
    return f"({left} if {random_condition(rng, names)} else {random_expression(rng, names, depth + 1)})"


def random_program(seed):
    fake = Faker()
    fake.seed_instance(seed)
    rng = fake.random
    lines = [
        f"a = {rng.randint(-20, 20)}",
        f"b = {rng.randint(-20, 20)}",
        "total = 0",
        "history = []",
        f"for i in range({rng.randint(0, 12)}):",
        f"    if {random_condition(rng, ['i', 'a', 'b'])}:",
        f"        total += {random_expression(rng, ['i', 'a', 'b'])}",
        "    else:",
        f"        total -= {random_expression(rng, ['i', 'a'])}",
        "    history.append(total)",
        "",
        "def combine(x, y=3):",
        f"    return {random_expression(rng, ['x', 'y'])}",
        "",
        f"items = [{random_expression(rng, ['k', 'a'])} for k in range({rng.randint(0, 6)}) "
        f"if k % 2 == {rng.randint(0, 1)}]",
        "print(total, combine(a), combine(b, y=2), items)",
        'print(len(history), str(total) + "!", f"{a}:{b}", sep="|")',
        'counts = {"even": 0, "odd": 0}',
        "for value in history:",
        '    counts["even" if value % 2 == 0 else "odd"] += 1',
        "print(counts)",
        "step = 0",
        "while step < 5:",
        "    step += 1",
        f"    if step == {rng.randint(1, 6)}:",
        "        break",
        "print(step, history[-1] if history else None)",
        "try:",
        f"    ratio = a // (b - b) + {rng.randint(0, 3)}",
        "except ZeroDivisionError as error:",
        '    print("caught", error)',
        "text = " + repr(fake.word()),
        "print(text.upper(), text[::-1], len(text) * a)",
    ]
    return '\n'.join(lines) + '\n'


def reference_output(source):
    """Вывод той же программы под обычным Python"""
    output = []

    def capture(*values, sep=' '):
        output.append(sep.join(str(value) for value in values))

    exec(compile(source, '<reference>', 'exec'), {'print': capture})
    return output


ADVERSARIAL_PROGRAMS = [
    'import os\nos.system("rm -rf /")',
    'from subprocess import run\nrun("ls")',
    '__import__("os").system("ls")',
    'open("/etc/passwd")',
    'eval("1 + 1")',
    'exec("x = 1")',
    'globals()',
    'getattr(print, "x")',
    '().__class__.__bases__[0].__subclasses__()',
    '"".__class__.__mro__',
    'sleep.__globals__',
    'print.__self__',
    '__builtins__',
    'x = lambda: 0',
    'class Escape:\n    pass',
    'with open("x") as f:\n    pass',
    'del history',
    'global counter',
    'raise SystemExit(1)',
    'assert False',
    'x = [1]\nx.pop()',
    'x = {1, 2}',
    'x = (y for y in range(3))',
    'x = [y for y in range(3) for z in range(3)]',
    'x = b"bytes"',
    'x = f"{print!r}"',
    'x = "{0.__class__}".format(1)',
    'def f():\n    yield 1',
    'async def f():\n    pass',
    'x = 1\nx.attribute = 2',
    'action = sleep',
    '@decorator\ndef f():\n    pass',
    'while True:\n    pass',
    'def f():\n    return f()\nf()',
    'x = "a" * 10 ** 9',
    'x = 9 ** 9 ** 9',
    'x = []\nwhile True:\n    x.append(x)',
    'try:\n    while True:\n        pass\nexcept Exception:\n    print("caught")\nfinally:\n    print("finally")',
    'x = "{:99999999}".format(1)',
    'x = "%99999999d" % 1',
    'if (n := 10):\n    pass',
    'def f(*args):\n    pass',
    'x = {**{}}',
    'print(*[1, 2])',
    'x = 1 << 100000',
    'x = 5 @ 5',
    'a = [0] * 99999\nb = [a] * 30\nx = "{}".format(b)',
    'a = [0] * 99999\nb = [a] * 30\nx = "%s" % (b,)',
]


@pytest.mark.properties
class TestDifferential:
    """Тесты: вывод интерпретатора совпадает с эталонным Python"""

    @pytest.mark.parametrize('seed', range(DIFFERENTIAL_PROGRAMS))
    def test_matches_reference(self, run_source, seed):
        """Тест случайной программы против эталона"""
        source = random_program(seed)
        trace, env = run_source(source)
        assert trace.status == ExecutionStatus.COMPLETED, source
        assert env.printed == reference_output(source), source


@pytest.mark.properties
class TestDeterminism:
    """Тесты детерминизма выполнения"""

    SOURCES = [
        'number = generate_random_number(1, 101)\nprint(number)\nsleep(number)',
        'for path in find_all_audio_files():\n    play_audio_file(path)\n    sleep(5)\n    stop_audio_player()',
        'try:\n    shell("unknown")\nexcept HostError as e:\n    print(str(e))',
        'while True:\n    sleep(1)',
    ]

    @pytest.mark.parametrize('source', SOURCES)
    def test_three_runs_identical(self, run_source, source):
        """Тест: три прогона в свежих окружениях дают побайтно одинаковые трассы"""
        limits = ExecLimits(max_steps=5000)
        traces = [run_source(source, limits=limits)[0].to_jsonl() for _ in range(3)]
        assert traces[0] == traces[1] == traces[2]

    def test_fixture_workflows_identical(self, run_source, fixture_transport):
        """Тест: каждый записанный workflow трижды даёт одну и ту же трассу"""
        checked = 0
        for model_name, intention_id in fixture_transport.pairs():
            try:
                parsed = extract_code(fixture_transport.transcript(model_name, intention_id).full_text)
            except NoCodeBlock:
                continue
            traces = {run_source(parsed.code)[0].to_jsonl() for _ in range(3)}
            assert len(traces) == 1, (model_name, intention_id)
            checked += 1
        assert checked == 62

    def test_seed_changes_random_numbers(self, run_source, env_factory):
        """Тест: другой seed даёт другую последовательность"""
        source = 'print(generate_random_number(0, 1000000))'
        first, _ = run_source(source, env=env_factory.build(seed=1))
        second, _ = run_source(source, env=env_factory.build(seed=2))
        assert first.outputs != second.outputs


@pytest.mark.sandbox
class TestAdversarialPrograms:
    """Тесты: враждебные программы не производят эффектов"""

    def test_corpus_size(self):
        """Тест размера корпуса"""
        assert len(ADVERSARIAL_PROGRAMS) >= 30

    @pytest.mark.parametrize('source', ADVERSARIAL_PROGRAMS)
    def test_zero_effects(self, run_source, source):
        """Тест: программа завершается ошибкой без эффектов"""
        limits = ExecLimits(max_steps=10_000, max_call_depth=32, max_value_size=100_000)
        trace, env = run_source(source, limits=limits)
        assert trace.status != ExecutionStatus.COMPLETED, source
        assert env.effects == 0
        assert env.printed == []
        assert env.sent_emails == []
        assert trace.calls == []
        assert trace.events[-1].payload['status'] == trace.status.value


@pytest.mark.sandbox
class TestSandboxGuard:
    """Тесты разбора подмножества"""

    @pytest.mark.parametrize('source,construct', [
        ('import os', 'import'),
        ('class A:\n    pass', 'class'),
        ('x = lambda: 1', 'lambda'),
        ('raise ValueError("x")', 'raise'),
        ('x = {1}', 'set'),
        ('"".__class__', 'dunder access'),
        ('x = 1\nx.y = 2', 'attribute assignment'),
        ('for i in range(3):\n    pass\nelse:\n    pass', 'loop-else'),
        ('x = [a for a in range(2) for b in range(2)]', 'nested comprehension'),
    ])
    def test_rejected_construct(self, source, construct):
        """Тест: конструкция названа в ошибке"""
        with pytest.raises(UnsupportedConstruct) as exc_info:
            parse_workflow(source)
        assert exc_info.value.construct == construct

    @pytest.mark.parametrize('source', [
        'def f(:\n    pass',
        'return 1',
        'break',
        'x = (',
    ])
    def test_syntax_errors(self, source):
        """Тест синтаксических ошибок"""
        with pytest.raises(WorkflowSyntaxError):
            parse_workflow(source)

    def test_defined_functions(self):
        """Тест списка определённых функций"""
        program = parse_workflow('def a():\n    def b():\n        pass\n    b()\na()\n')
        assert program.defined_functions == ('a', 'b')

    def test_annotations_are_not_evaluated(self, run_source):
        """Тест: аннотации не вычисляются"""
        trace, _ = run_source('def f(x: SomeType) -> Other:\n    return x\nvalue: int = f(1)\nprint(str(value))')
        assert trace.outputs == ['1']
