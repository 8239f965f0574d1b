"""
Тесты сигнатур и FunctionTable
"""

import pytest

from apps.environment.functions import STANDARD_SIGNATURES
from apps.functions.exceptions import (
    ArgumentTypeMismatch,
    ArityMismatch,
    DuplicateName,
    HostError,
    InvalidParameter,
    MalformedSignature,
    ReturnTypeMismatch,
    TableFrozen,
    TableNotFrozen,
    UnknownFunction,
)
from apps.functions.signatures import (
    FunctionKind,
    FunctionSpec,
    ParamSpec,
    parse_signature,
    render_signature,
)
from apps.functions.table import FunctionTable
from apps.functions.types import INTEGER, NULL, STRING, VOID, SemanticType
from conftest import FunctionSpecFactory, ParamSpecFactory


@pytest.mark.unit
class TestSignatures:
    """Тесты строкового представления сигнатур"""

    @pytest.mark.parametrize('line', STANDARD_SIGNATURES)
    def test_standard_signatures_round_trip(self, line):
        """Тест: каждая из 16 сигнатур восстанавливается побайтно"""
        assert render_signature(parse_signature(line)) == line

    def test_sixteen_standard_signatures(self):
        """Тест размера стандартного каталога"""
        assert len(STANDARD_SIGNATURES) == 16

    def test_parse_fields(self, sample_spec):
        """Тест разбора полей сигнатуры"""
        spec = parse_signature(
            'function generate_random_number(inclusiveStart: Integer, exclusiveEnd: Integer): Integer'
        )
        assert spec == sample_spec
        assert spec.arity == 2
        assert spec.param_names == ['inclusiveStart', 'exclusiveEnd']

    def test_doc_comment(self):
        """Тест: doc рендерится комментарием в конце строки"""
        spec = parse_signature('function get_temperature(): Integer # degrees   Celsius')
        assert spec.doc == 'degrees Celsius'
        assert render_signature(spec) == 'function get_temperature(): Integer # degrees Celsius'

    def test_multiline_doc_collapses(self):
        """Тест: многострочный doc схлопывается в одну строку"""
        spec = FunctionSpecFactory(name='noop', params=(), doc='first line\n  second line')
        assert render_signature(spec) == 'function noop(): void # first line second line'

    def test_kind_is_carried(self):
        """Тест передачи вида функции"""
        spec = parse_signature('function shell(command: String): String', kind=FunctionKind.REAL)
        assert spec.kind == FunctionKind.REAL

    @pytest.mark.parametrize('line', [
        '',
        'def sleep(seconds: Integer): void',
        'function sleep(seconds Integer): void',
        'function sleep(seconds: Integr): void',
        'function sleep(seconds: Integer)',
        'function sleep(seconds: Integer): Collection<',
    ])
    def test_malformed_signature(self, line):
        """Тест некорректных сигнатур"""
        with pytest.raises(MalformedSignature):
            parse_signature(line)

    @pytest.mark.parametrize('line', [
        'function sleep(seconds: void): void',
        'function sleep(a: Integer, a: Integer): void',
        'function 1sleep(): void',
        'function sleep(class: Integer): void',
        'function lookup(): Collection<void>',
    ])
    def test_invalid_parameters(self, line):
        """Тест недопустимых параметров и имён"""
        with pytest.raises((InvalidParameter, MalformedSignature)):
            parse_signature(line)

    def test_param_spec_rejects_void(self):
        """Тест: параметр не может иметь тип void"""
        with pytest.raises(InvalidParameter):
            ParamSpec('value', VOID)

    def test_factory_specs_render(self):
        """Тест фабрики спецификаций"""
        spec = FunctionSpecFactory(params=(ParamSpecFactory(name='text'),))
        assert render_signature(spec).endswith('(text: String): void')


@pytest.mark.unit
class TestFunctionTableRegistration:
    """Тесты регистрации и заморозки"""

    def test_order_is_preserved(self, standard_table):
        """Тест: порядок регистрации сохраняется"""
        assert [render_signature(spec) for spec in standard_table] == list(STANDARD_SIGNATURES)
        assert standard_table.names()[0] == 'find_contact_id'
        assert len(standard_table) == 16
        assert 'sleep' in standard_table

    def test_duplicate_name(self, create_table):
        """Тест повторной регистрации имени"""
        table = create_table(('function echo(text: String): String', lambda env, text: text), freeze=False)
        with pytest.raises(DuplicateName):
            table.register_signature('function echo(value: Integer): Integer', lambda env, value: value)

    def test_frozen_table_rejects_registration(self, echo_table):
        """Тест: замороженная таблица неизменяема"""
        with pytest.raises(TableFrozen):
            echo_table.register_signature('function extra(): void', lambda env: None)

    def test_callback_arity_checked(self):
        """Тест: callback должен принимать env и все параметры"""
        table = FunctionTable()
        with pytest.raises(ArityMismatch):
            table.register_signature('function add(a: Integer, b: Integer): Integer', lambda env, a: a)

    def test_invoke_requires_frozen(self, create_table):
        """Тест: вызов только после freeze()"""
        table = create_table(('function echo(text: String): String', lambda env, text: text), freeze=False)
        with pytest.raises(TableNotFrozen):
            table.invoke('echo', ['x'], env=None)

    def test_lookup_unknown(self, echo_table):
        """Тест поиска неизвестной функции"""
        with pytest.raises(UnknownFunction):
            echo_table.lookup('missing')

    def test_standard_kinds_follow_environment(self, host_env):
        """Тест: реальные интеграции помечаются по флагам окружения"""
        from apps.environment.functions import build_standard_table

        assert build_standard_table().lookup('shell').kind == FunctionKind.STUB
        host_env.allow_real_shell = True
        assert build_standard_table(host_env).lookup('shell').kind == FunctionKind.REAL


@pytest.mark.unit
class TestFunctionTableInvoke:
    """Тесты вызова с проверкой типов"""

    def test_positional_and_keyword(self, echo_table):
        """Тест позиционных и именованных аргументов"""
        assert echo_table.invoke('add', [2, 3], env=None) == 5
        assert echo_table.invoke('add', [2], env=None, kwargs={'b': 5}) == 7
        assert echo_table.invoke('add', [], env=None, kwargs={'b': 1, 'a': 2}) == 3

    def test_arity_mismatch(self, echo_table):
        """Тест неверного числа аргументов"""
        with pytest.raises(ArityMismatch):
            echo_table.invoke('add', [1], env=None)
        with pytest.raises(ArityMismatch):
            echo_table.invoke('add', [1, 2, 3], env=None)
        with pytest.raises(ArityMismatch):
            echo_table.invoke('add', [1], env=None, kwargs={'b': 2, 'c': 3})

    def test_argument_type_mismatch(self, echo_table):
        """Тест несоответствия типа аргумента"""
        with pytest.raises(ArgumentTypeMismatch) as exc_info:
            echo_table.invoke('add', [1, '2'], env=None)
        assert exc_info.value.param == 'b'
        assert exc_info.value.expected == 'Integer'
        assert exc_info.value.got == 'String'

    def test_boolean_is_not_integer(self, echo_table):
        """Тест: Boolean не проходит как Integer"""
        with pytest.raises(ArgumentTypeMismatch):
            echo_table.invoke('add', [True, 1], env=None)

    def test_callback_not_called_on_bad_arguments(self, create_table):
        """Тест: проверки выполняются до вызова callback"""
        calls = []
        table = create_table(('function note(text: String): void', lambda env, text: calls.append(text)))
        with pytest.raises(ArgumentTypeMismatch):
            table.invoke('note', [1], env=None)
        assert calls == []

    def test_return_type_checked(self, create_table):
        """Тест проверки возвращаемого значения"""
        table = create_table(('function broken(): Integer', lambda env: 'not a number'))
        with pytest.raises(ReturnTypeMismatch):
            table.invoke('broken', [], env=None)

    def test_void_must_return_none(self, create_table):
        """Тест: void-функция возвращает None"""
        table = create_table(('function leak(): void', lambda env: 1))
        with pytest.raises(ReturnTypeMismatch):
            table.invoke('leak', [], env=None)

    def test_callback_exception_wrapped(self, create_table):
        """Тест: исключение callback оборачивается в HostError"""
        def explode(env):
            raise KeyError('missing')

        table = create_table(('function explode(): void', explode))
        with pytest.raises(HostError) as exc_info:
            table.invoke('explode', [], env=None)
        assert 'KeyError' in str(exc_info.value)

    def test_host_error_with_status(self, create_table):
        """Тест: HostError со статусом проходит без изменений"""
        def fail(env, url):
            raise HostError('Bad Request', status=400)

        table = create_table(('function fetch(url: String): String', fail))
        with pytest.raises(HostError) as exc_info:
            table.invoke('fetch', ['http://example.org'], env=None)
        assert exc_info.value.status == 400
        assert str(exc_info.value) == '400 Bad Request'

    def test_env_is_passed_first(self, create_table):
        """Тест: callback получает окружение первым аргументом"""
        table = create_table(('function whoami(): String', lambda env: env['name']))
        assert table.invoke('whoami', [], env={'name': 'host'}) == 'host'

    def test_nullable_return(self, create_table):
        """Тест: Integer|null допускает None"""
        table = create_table(('function maybe(flag: Boolean): Integer|null',
                              lambda env, flag: 1 if flag else None))
        assert table.invoke('maybe', [True], env=None) == 1
        assert table.invoke('maybe', [False], env=None) is None

    def test_spec_from_types(self):
        """Тест ручного построения спецификации"""
        spec = FunctionSpec('find', (ParamSpec('query', STRING),), SemanticType.union(INTEGER, NULL))
        table = FunctionTable().register(spec, lambda env, query: None).freeze()
        assert table.invoke('find', ['x'], env=None) is None
