"""
Pytest configuration and fixtures
Общие фикстуры для всех тестов
"""

import factory
import pytest
import yaml
from faker import Faker

from apps.benchmark.classification import FailureReason
from apps.benchmark.criteria import load_criteria
from apps.benchmark.records import RunRecord
from apps.benchmark.runner import BenchmarkRunner
from apps.environment.functions import build_standard_table
from apps.environment.loader import EnvironmentFactory, load_environment_config
from apps.functions.signatures import FunctionSpec, ParamSpec
from apps.functions.table import FunctionTable
from apps.functions.types import INTEGER, STRING, VOID
from apps.interpreter.evaluator import run_workflow_source
from apps.interpreter.limits import ExecLimits
from apps.llm.config import load_model_catalog
from apps.llm.transports import load_fixture_transport
from apps.prompts.intentions import Intention, load_intentions
from core.patterns.singleton import cache_manager

FAKER_SEED = 20240611


# ============================================================================
# Factories
# ============================================================================

class ParamSpecFactory(factory.Factory):
    class Meta:
        model = ParamSpec

    name = factory.Sequence(lambda n: f"param_{n}")
    type = STRING


class FunctionSpecFactory(factory.Factory):
    class Meta:
        model = FunctionSpec

    name = factory.Sequence(lambda n: f"function_{n}")
    params = factory.LazyFunction(lambda: (ParamSpecFactory(),))
    return_type = VOID
    doc = None


class IntentionFactory(factory.Factory):
    class Meta:
        model = Intention

    id = factory.Sequence(lambda n: n + 100)
    text = factory.Faker('sentence', nb_words=6)


class RunRecordFactory(factory.Factory):
    class Meta:
        model = RunRecord

    model_name = 'phi-4'
    intention_id = 1
    success = True
    failure_reason = None
    has_preamble = False
    has_postamble = False
    has_comments = False
    ttft_ms = 400.0
    response_time_s = 2.0
    trace_ref = factory.LazyAttribute(lambda record: f"{record.model_name}/{record.intention_id}")
    repetition = 0
    proprietary = False

    class Params:
        failed = factory.Trait(success=False, failure_reason=FailureReason.PREDICATE_FAILED)


# ============================================================================
# Caches and randomness
# ============================================================================

@pytest.fixture(autouse=True)
def clear_cache():
    """Кеш загруженных фикстур окружения не переживает тест"""
    cache_manager.clear()
    yield
    cache_manager.clear()


@pytest.fixture
def faker():
    """Faker с фиксированным seed"""
    fake = Faker()
    fake.seed_instance(FAKER_SEED)
    return fake


# ============================================================================
# Function table Fixtures
# ============================================================================

@pytest.fixture
def standard_table():
    """Замороженный каталог 16 стандартных функций"""
    return build_standard_table()


@pytest.fixture
def create_table():
    """Фабрика таблиц из пар (signature line, callback)"""
    def _create(*entries, freeze=True):
        table = FunctionTable()
        for line, callback in entries:
            table.register_signature(line, callback)
        return table.freeze() if freeze else table
    return _create


@pytest.fixture
def echo_table(create_table):
    """Небольшая таблица для тестов интерпретатора"""
    return create_table(
        ('function echo(text: String): String', lambda env, text: text),
        ('function add(a: Integer, b: Integer): Integer', lambda env, a, b: a + b),
        ('function print(text: String): void', lambda env, text: None),
    )


@pytest.fixture
def sample_spec():
    return FunctionSpec(
        name='generate_random_number',
        params=(ParamSpec('inclusiveStart', INTEGER), ParamSpec('exclusiveEnd', INTEGER)),
        return_type=INTEGER,
    )


# ============================================================================
# Environment Fixtures
# ============================================================================

@pytest.fixture
def environment_config(settings):
    """Фикстура окружения из fixtures/environment.yaml"""
    return load_environment_config(settings.ENVIRONMENT_FIXTURE)


@pytest.fixture
def env_factory(environment_config):
    return EnvironmentFactory(environment_config)


@pytest.fixture
def host_env(env_factory):
    """Свежее окружение с виртуальными часами"""
    return env_factory.build()


@pytest.fixture
def run_source(standard_table, env_factory):
    """Выполнить исходник workflow в свежем окружении; возвращает (trace, env)"""
    def _run(source, limits=None, env=None, table=None, observers=()):
        env = env if env is not None else env_factory.build()
        trace = run_workflow_source(source, table or standard_table, env,
                                    limits or ExecLimits(), intention_id=None, observers=observers)
        return trace, env
    return _run


# ============================================================================
# LLM and Transport Fixtures
# ============================================================================

@pytest.fixture
def fixture_transport(settings):
    """Транскрипты paper.fixtures.yaml"""
    return load_fixture_transport(settings.BENCHMARK_FIXTURES)


@pytest.fixture
def model_catalog(settings):
    return load_model_catalog(settings.MODEL_CATALOG, fixture_path=settings.BENCHMARK_FIXTURES)


@pytest.fixture
def models_by_name(model_catalog):
    return {model.model_name: model for model in model_catalog}


# ============================================================================
# Fixtures-on-disk
# ============================================================================

@pytest.fixture
def intentions(settings):
    return load_intentions(settings.INTENTIONS_FILE)


@pytest.fixture
def criteria(settings):
    return load_criteria(settings.CRITERIA_FILE)


@pytest.fixture
def write_yaml(tmp_path):
    """Записать словарь в YAML-файл во временном каталоге"""
    def _write(name, data):
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data, allow_unicode=True, sort_keys=False), encoding='utf-8')
        return path
    return _write


# ============================================================================
# Benchmark Fixtures
# ============================================================================

@pytest.fixture
def bench_runner(standard_table, env_factory, criteria):
    return BenchmarkRunner(standard_table, env_factory, ExecLimits(), criteria)


@pytest.fixture
def bench_report(bench_runner, intentions, model_catalog):
    """Полный прогон 7 x 9 по фикстурам"""
    return bench_runner.run_matrix(intentions, model_catalog)
