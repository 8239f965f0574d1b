"""
Тесты сборки промпта и набора намерений
"""

import pytest

from apps.environment.functions import STANDARD_SIGNATURES
from apps.functions.table import FunctionTable
from apps.llm.config import ModelConfig
from apps.prompts.builder import build_prompt, render_docs
from apps.prompts.exceptions import EmptyTable, IntentionNotFound
from apps.prompts.intentions import (
    Intention,
    find_intention,
    load_intentions,
    match_intention,
)
from apps.prompts.templates import DEFAULT_ROLE, PROMPT_TEMPLATE_VERSION
from conftest import IntentionFactory
from core.exceptions import ConfigurationError


@pytest.fixture
def model(settings):
    return ModelConfig('phi-4', fixture_path=settings.BENCHMARK_FIXTURES)


@pytest.mark.unit
class TestRenderDocs:
    """Тесты документации каталога для модели"""

    def test_sixteen_lines_in_order(self, standard_table):
        """Тест: 16 строк в порядке регистрации"""
        docs = render_docs(standard_table)
        assert docs.splitlines() == list(STANDARD_SIGNATURES)

    def test_empty_table(self):
        """Тест: пустой каталог не документируется"""
        with pytest.raises(EmptyTable):
            render_docs(FunctionTable().freeze())

    def test_doc_comment_rendered(self, create_table):
        """Тест: doc функции рендерится комментарием"""
        table = create_table(('function ping(): void # check the connection', lambda env: None))
        assert render_docs(table) == 'function ping(): void # check the connection'


@pytest.mark.unit
class TestBuildPrompt:
    """Тесты сборки PromptBundle"""

    def test_bundle_contents(self, standard_table, model, intentions):
        """Тест содержимого сообщений"""
        bundle = build_prompt(intentions[0], standard_table, model)
        assert bundle.role_message == DEFAULT_ROLE
        assert bundle.model_params.temperature == 0.0
        assert bundle.model_params.model_name == 'phi-4'
        assert bundle.intention_id == 1
        assert bundle.template_version == PROMPT_TEMPLATE_VERSION
        assert render_docs(standard_table) in bundle.user_message
        assert bundle.user_message.rstrip().endswith('Please sleep for 5 seconds')
        assert 'fenced code block' in bundle.user_message
        assert 'Do not import' in bundle.user_message

    def test_build_is_pure(self, standard_table, model):
        """Тест: одинаковые входы - одинаковый результат"""
        intention = IntentionFactory()
        assert build_prompt(intention, standard_table, model) == build_prompt(intention, standard_table, model)

    def test_messages(self, standard_table, model):
        """Тест формата chat completions"""
        messages = build_prompt(IntentionFactory(), standard_table, model).to_messages()
        assert [message['role'] for message in messages] == ['system', 'user']

    def test_custom_role(self, standard_table, settings):
        """Тест собственной роли модели"""
        model = ModelConfig('m', role='You write workflows', fixture_path=settings.BENCHMARK_FIXTURES)
        assert build_prompt(IntentionFactory(), standard_table, model).role_message == 'You write workflows'

    def test_intention_text_verbatim(self, standard_table, model, faker):
        """Тест: текст намерения попадает в промпт без изменений"""
        for _ in range(20):
            intention = IntentionFactory(text=faker.text(max_nb_chars=200))
            assert intention.text in build_prompt(intention, standard_table, model).user_message


@pytest.mark.unit
class TestIntentions:
    """Тесты набора намерений"""

    def test_bundled_suite(self, intentions):
        """Тест девяти намерений бенчмарка"""
        assert [intention.id for intention in intentions] == list(range(1, 10))
        assert intentions[4].text == 'Which is the largest city in Germany?'
        assert intentions[7].text == (
            'Please summarize the Wikipedia article '
            'https://en.wikipedia.org/wiki/Transformer_(deep_learning_architecture)'
        )

    def test_match_intention(self, intentions):
        """Тест поиска по тексту без учёта регистра и пробелов"""
        assert match_intention('  please SLEEP for 5   seconds ', intentions).id == 1
        assert match_intention('Please dance', intentions) is None

    def test_find_intention(self, intentions):
        """Тест поиска по номеру"""
        assert find_intention(intentions, 9).text.startswith('Please install nginx')
        with pytest.raises(IntentionNotFound):
            find_intention(intentions, 10)

    def test_empty_text_rejected(self):
        """Тест: пустой текст намерения"""
        with pytest.raises(ConfigurationError):
            Intention(1, '   ')

    def test_duplicate_ids(self, write_yaml):
        """Тест повторного номера намерения"""
        path = write_yaml('intentions.yaml', {
            'schema': 'intent-forge/intentions@1',
            'intentions': [{'id': 1, 'text': 'a'}, {'id': 1, 'text': 'b'}],
        })
        with pytest.raises(ConfigurationError):
            load_intentions(path)

    def test_wrong_schema(self, write_yaml):
        """Тест неверной схемы"""
        with pytest.raises(ConfigurationError):
            load_intentions(write_yaml('intentions.yaml', {'schema': 'x', 'intentions': []}))
