"""
Сборка промпта: render_docs + build_prompt.

build_prompt - чистая функция от (intention, table, config): одинаковые
входы дают побайтно одинаковый PromptBundle.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, List, Optional

from apps.functions.signatures import render_signature
from apps.functions.table import FunctionTable

from .exceptions import EmptyTable
from .intentions import Intention
from .templates import DEFAULT_ROLE, PROMPT_TEMPLATE_VERSION, USER_PROMPT_TEMPLATE

if TYPE_CHECKING:
    from apps.llm.config import ModelConfig


@dataclass(frozen=True)
class ModelParams:
    temperature: float
    model_name: str


@dataclass(frozen=True)
class PromptBundle:
    role_message: str
    user_message: str
    model_params: ModelParams
    intention_id: Optional[int] = None
    template_version: str = PROMPT_TEMPLATE_VERSION

    def to_messages(self) -> List[Dict[str, str]]:
        """Сообщения в формате chat completions"""
        return [
            {'role': 'system', 'content': self.role_message},
            {'role': 'user', 'content': self.user_message},
        ]


def render_docs(table: FunctionTable) -> str:
    """Одна строка сигнатуры на функцию, в порядке регистрации"""
    if len(table) == 0:
        raise EmptyTable()
    return '\n'.join(render_signature(spec) for spec in table)


def build_prompt(intention: Intention, table: FunctionTable, config: 'ModelConfig') -> PromptBundle:
    docs = render_docs(table)
    user_message = USER_PROMPT_TEMPLATE.format(docs=docs, intention=intention.text)
    return PromptBundle(
        role_message=config.role or DEFAULT_ROLE,
        user_message=user_message,
        model_params=ModelParams(temperature=config.temperature, model_name=config.model_name),
        intention_id=intention.id,
    )
