"""
Сборка конвейера из CliConfig: каталог моделей, окружение, критерии, раннер.
"""

import logging
from typing import Any, Dict, Iterable, List, Optional

from apps.benchmark.criteria import SuccessCriterion, load_criteria
from apps.benchmark.runner import BenchmarkRunner
from apps.environment.functions import build_standard_table
from apps.environment.loader import EnvironmentFactory, load_environment_config
from apps.functions.table import FunctionTable
from apps.llm.config import ModelConfig, load_model_catalog
from apps.prompts.intentions import Intention, load_intentions
from core.patterns.observer import Observer

from .config import CliConfig, select_models

logger = logging.getLogger(__name__)


def load_models(config: CliConfig) -> List[ModelConfig]:
    catalog = load_model_catalog(
        config.models_file,
        fixture_path=None if config.live else config.fixtures,
        live=config.live,
        endpoint_url=config.endpoint if config.live else None,
    )
    return select_models(catalog, config.models)


def load_suite(config: CliConfig) -> List[Intention]:
    return load_intentions(config.intentions)


def load_success_criteria(config: CliConfig) -> Dict[int, SuccessCriterion]:
    return load_criteria(config.criteria) if config.criteria is not None else {}


def environment_factory(config: CliConfig) -> EnvironmentFactory:
    return EnvironmentFactory(load_environment_config(config.environment))


def function_table(config: CliConfig) -> FunctionTable:
    """
    Каталог 16 стандартных функций.

    Пометка REAL/STUB повторяет то, как окружение будет собрано для прогона.
    """
    probe = environment_factory(config).build(
        allow_real_shell=config.allow_real_shell,
        live_web=config.live,
        llm_backend=(lambda query: '') if config.live else None,
    )
    return build_standard_table(probe)


def build_runner(config: CliConfig, observers: Iterable[Observer] = (),
                 env_overrides: Optional[Dict[str, Any]] = None,
                 real_time: bool = False) -> BenchmarkRunner:
    overrides: Dict[str, Any] = {'allow_real_shell': config.allow_real_shell}
    if config.seed is not None:
        overrides['seed'] = int(config.seed)
    overrides.update(env_overrides or {})
    runner = BenchmarkRunner(
        table=function_table(config),
        env_factory=environment_factory(config),
        limits=config.exec_limits(),
        criteria=load_success_criteria(config),
        observers=observers,
        env_overrides=overrides,
        real_time=real_time,
    )
    logger.debug(f"Runner ready: transport={config.transport.value}, limits={runner.limits}")
    return runner
