"""
Тесты критериев успеха и классификации прогона
"""

import pytest

from apps.analysis.exceptions import NoCodeBlock
from apps.analysis.extraction import extract_code
from apps.benchmark.classification import FailureReason, classify_success
from apps.benchmark.criteria import (
    AnyValue,
    Between,
    Contains,
    Literal,
    OneOf,
    Regex,
    build_matcher,
    parse_criteria,
)
from apps.benchmark.exceptions import CriteriaError, UnknownMatcher, UnknownProbe
from apps.interpreter.limits import ExecLimits
from core.exceptions import ConfigurationError

CAR_TITLE_WORKFLOW = '''
car_title_path = find_file("car title")
insurance_id = find_contact_id("insurance")
insurance_email = find_contact_email(insurance_id)
send_email(insurance_email, "Car Title", "Attached.", [car_title_path])
'''


def criteria_data(*items):
    return {'schema': 'intent-forge/criteria@1', 'criteria': list(items)}


@pytest.fixture
def classify(run_source, criteria):
    """Выполнить ответ модели и классифицировать его по критерию намерения"""
    def _classify(code, intention_id=None, limits=None):
        parsed = extract_code(f"```python\n{code}\n```")
        trace, env = run_source(parsed.code, limits=limits)
        return classify_success(parsed, trace, env, criteria.get(intention_id))
    return _classify


@pytest.mark.unit
class TestArgumentMatchers:
    """Тесты сопоставителей аргументов"""

    def test_literal(self):
        """Тест точного значения; bool не равен int"""
        assert Literal(5).matches(5)
        assert not Literal(5).matches(6)
        assert not Literal(True).matches(1)
        assert not Literal(1).matches(True)

    def test_contains(self):
        """Тест подстроки в строке и в списке"""
        assert Contains('nginx').matches('sudo apt-get install NGINX')
        assert Contains('car').matches(['files/notes.txt', 'files/car_title.pdf'])
        assert not Contains('car').matches(42)

    def test_regex(self):
        """Тест регулярного выражения без учёта регистра"""
        assert Regex(r'^ls\b').matches('LS -a')
        assert not Regex(r'^ls\b').matches(['ls'])

    def test_one_of_and_between(self):
        """Тест вариантов и диапазона"""
        assert OneOf((100, 101)).matches(101)
        assert not OneOf((100, 101)).matches(99)
        assert Between(1, 100).matches(1) and Between(1, 100).matches(100)
        assert not Between(1, 100).matches(True)
        assert not Between(1, 100).matches('50')

    def test_build_matcher(self):
        """Тест построения сопоставителя из YAML"""
        assert build_matcher(5) == Literal(5)
        assert build_matcher({'one_of': [1, 2]}) == OneOf((1, 2))
        assert build_matcher({'between': [0, 9]}) == Between(0, 9)
        assert isinstance(build_matcher({'any': True}), AnyValue)
        with pytest.raises(UnknownMatcher):
            build_matcher({'fuzzy': 'x'})


@pytest.mark.unit
class TestCriteriaLoading:
    """Тесты загрузки критериев"""

    def test_bundled_criteria(self, criteria):
        """Тест: критерий для каждого из девяти намерений"""
        assert sorted(criteria) == list(range(1, 10))
        assert criteria[1].expected_functions == ('sleep',)
        assert [variant.name for variant in criteria[5].variants] == ['subquery', 'known-answer']

    def test_wrong_schema(self):
        """Тест неверной схемы"""
        with pytest.raises(CriteriaError):
            parse_criteria({'schema': 'other', 'criteria': []})

    def test_criteria_error_is_configuration_error(self):
        """Тест: ошибка критериев - ошибка конфигурации (код выхода 2)"""
        with pytest.raises(ConfigurationError):
            parse_criteria(None)

    @pytest.mark.parametrize('item', [
        {'intention_id': 1, 'variants': []},
        {'intention_id': 1, 'variants': [{'name': 'empty', 'all': []}]},
        {'intention_id': 1, 'variants': [{'all': [{'called': 'a', 'not_called': 'b'}]}]},
        {'intention_id': 1, 'variants': [{'all': [{'teleported': 'a'}]}]},
        {'variants': [{'all': [{'called': 'sleep'}]}]},
    ])
    def test_invalid_items(self, item):
        """Тест некорректных записей"""
        with pytest.raises(CriteriaError):
            parse_criteria(criteria_data(item))

    def test_duplicate_intention(self):
        """Тест повторного критерия"""
        item = {'intention_id': 1, 'variants': [{'all': [{'called': 'sleep'}]}]}
        with pytest.raises(CriteriaError):
            parse_criteria(criteria_data(item, dict(item)))

    def test_unknown_probe(self):
        """Тест неизвестной проверки окружения"""
        item = {'intention_id': 1, 'variants': [{'all': [{'env_check': 'coffee_brewed'}]}]}
        with pytest.raises(UnknownProbe):
            parse_criteria(criteria_data(item))

    def test_default_variant_names(self):
        """Тест имён вариантов по умолчанию"""
        item = {'intention_id': 3, 'variants': [{'all': [{'called': 'a'}]}, {'all': [{'called': 'b'}]}]}
        criterion = parse_criteria(criteria_data(item))[3]
        assert [variant.name for variant in criterion.variants] == ['variant-1', 'variant-2']


@pytest.mark.unit
class TestCriteriaEvaluation:
    """Тесты оценки критериев по трассе и окружению"""

    def test_matching_variant(self, run_source, criteria):
        """Тест выбора выполненного варианта"""
        trace, env = run_source('sleep(5)')
        assert criteria[1].matching_variant(trace, env) == 'sleep'
        trace, env = run_source('sleep(3)')
        assert criteria[1].matching_variant(trace, env) is None

    def test_second_variant(self, run_source, criteria):
        """Тест: достаточно одного варианта"""
        trace, env = run_source('print("The largest city in Germany is Berlin")')
        assert criteria[5].matching_variant(trace, env) == 'known-answer'

    def test_environment_probe(self, run_source, criteria):
        """Тест проверки отправленного письма"""
        trace, env = run_source(CAR_TITLE_WORKFLOW)
        assert criteria[7].matching_variant(trace, env) == 'email-insurer'
        assert env.sent_emails[0].to == 'claims@autosecure-insurance.example'

    def test_failed_calls_do_not_count(self, run_source, criteria):
        """Тест: вызов, завершившийся ошибкой, не засчитывается"""
        source = 'try:\n    shell("sudo apt-get install nginx")\nexcept HostError:\n    print("failed")'
        trace, env = run_source(source)
        assert criteria[9].matching_variant(trace, env) is None

    def test_not_called(self, run_source, criteria):
        """Тест варианта с not_called"""
        source = 'print(query_llm("Summarize the Transformer architecture"))'
        trace, env = run_source(source)
        assert criteria[8].matching_variant(trace, env) == 'model-knowledge'


@pytest.mark.unit
class TestClassification:
    """Тесты порядка причин неудачи"""

    def test_no_code_block(self, criteria):
        """Тест ответа без блока кода"""
        assert classify_success(None, None, None, criteria[1]) == (False, FailureReason.NO_CODE_BLOCK)
        assert classify_success(NoCodeBlock('sleep(5)'), None, None, criteria[1]) == \
            (False, FailureReason.NO_CODE_BLOCK)

    def test_success(self, classify):
        """Тест успешного прогона"""
        assert classify('sleep(5)', 1) == (True, None)

    def test_parse_rejected(self, classify):
        """Тест отклонённой программы"""
        assert classify('import time\ntime.sleep(5)', 1) == (False, FailureReason.PARSE_REJECTED)

    def test_runtime_error(self, classify):
        """Тест ошибки выполнения"""
        assert classify('sleep(5 // 0)', 1) == (False, FailureReason.RUNTIME_ERROR)

    def test_limit_exceeded(self, classify):
        """Тест превышения лимита"""
        result = classify('while True:\n    sleep(1)', 1, limits=ExecLimits(max_steps=200))
        assert result == (False, FailureReason.LIMIT_EXCEEDED)

    def test_runtime_error_before_wrong_functions(self, classify):
        """Тест: ошибка выполнения важнее набора функций"""
        assert classify('print("installing")\nsleep(1 // 0)', 9) == (False, FailureReason.RUNTIME_ERROR)

    def test_wrong_functions(self, classify):
        """Тест: вызваны только функции вне ожидаемого набора"""
        assert classify('print("Please install nginx yourself")', 9) == (False, FailureReason.WRONG_FUNCTIONS)

    def test_no_calls_is_predicate_failure(self, classify):
        """Тест: программа без вызовов"""
        assert classify('x = 1', 9) == (False, FailureReason.PREDICATE_FAILED)

    def test_predicate_failed(self, classify):
        """Тест: ожидаемая функция вызвана с другими аргументами"""
        assert classify('sleep(3)', 1) == (False, FailureReason.PREDICATE_FAILED)

    def test_without_criterion(self, classify):
        """Тест произвольного намерения: успех - завершение"""
        assert classify('print("hello")') == (True, None)
        assert classify('print(1 // 0)') == (False, FailureReason.RUNTIME_ERROR)
