"""
CliConfig: конфигурация оператора.

Приоритет: флаг командной строки > файл конфигурации > настройки.
Относительные пути в файле считаются от каталога файла.

Schema `intent-forge/controller@1`:

    schema: intent-forge/controller@1
    transport: fixture            # или live
    fixtures: paper.fixtures.yaml
    models_file: models.yaml
    models: []                    # пусто - все модели каталога
    environment: environment.yaml
    criteria: criteria.yaml
    intentions: intentions.yaml
    endpoint: https://api.openai.com
    seed: 42
    repeat: 1
    concurrency: 4
    allow_real_shell: false
    format: markdown
    limits: {max_steps: 100000, max_call_depth: 64, max_wall_time: 30, max_value_size: 1000000}
"""

import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from django.conf import settings

from apps.interpreter.limits import ExecLimits
from apps.llm.config import DEFAULT_API_KEY_ENV, TransportKind, mask_secret
from core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

CONTROLLER_SCHEMA = 'intent-forge/controller@1'
LIMIT_KEYS = ('max_steps', 'max_call_depth', 'max_wall_time', 'max_value_size')


@dataclass(frozen=True)
class CliConfig:
    config_path: Optional[Path] = None
    transport: TransportKind = TransportKind.FIXTURE
    fixtures: Optional[Path] = None
    models_file: Optional[Path] = None
    models: Tuple[str, ...] = ()
    environment: Optional[Path] = None
    criteria: Optional[Path] = None
    intentions: Optional[Path] = None
    endpoint: Optional[str] = None
    api_key_env: str = DEFAULT_API_KEY_ENV
    seed: Optional[int] = None
    repeat: int = 1
    concurrency: int = 1
    allow_real_shell: bool = False
    format: str = 'markdown'
    limits: Dict[str, Any] = field(default_factory=dict)
    out: Optional[Path] = None
    trace_out: Optional[Path] = None
    trace_dir: Optional[Path] = None
    verbosity: int = 1

    @property
    def live(self) -> bool:
        return self.transport == TransportKind.LIVE

    def exec_limits(self) -> ExecLimits:
        return ExecLimits.from_settings(**{key: self.limits.get(key) for key in LIMIT_KEYS})

    def validate(self) -> 'CliConfig':
        """
        Raises:
            ConfigurationError: live без endpoint/ключа, фикстуры без файла
        """
        if self.live:
            if not self.endpoint:
                raise ConfigurationError('live mode requires an endpoint (--endpoint or INTENT_FORGE_ENDPOINT)')
            key = os.environ.get(self.api_key_env) or settings.LLM_API_KEY
            if not key:
                raise ConfigurationError(f"live mode requires the {self.api_key_env} environment variable")
            logger.info(f"🔑 Using API key {mask_secret(key)} from {self.api_key_env}")
        else:
            if self.fixtures is None or not self.fixtures.is_file():
                raise ConfigurationError(f"fixture mode requires an existing fixture file, got {self.fixtures}")
        for name, path in (('models file', self.models_file), ('environment', self.environment),
                           ('criteria', self.criteria), ('intentions', self.intentions)):
            if path is not None and not path.is_file():
                raise ConfigurationError(f"{name} not found: {path}")
        if self.repeat < 1:
            raise ConfigurationError(f"--repeat must be at least 1, got {self.repeat}")
        if self.concurrency < 1:
            raise ConfigurationError(f"--concurrency must be at least 1, got {self.concurrency}")
        unknown = set(self.limits) - set(LIMIT_KEYS)
        if unknown:
            raise ConfigurationError(f"unknown limits: {', '.join(sorted(unknown))}")
        self.exec_limits()
        return self


def resolve_fixture_path(value: Union[str, Path, None], base: Optional[Path] = None) -> Optional[Path]:
    """
    Путь как есть, затем относительно base, затем в каталоге фикстур;
    расширение .yaml можно опускать (paper.fixtures).
    """
    if value in (None, ''):
        return None
    raw = Path(value).expanduser()
    roots = [Path('.')]
    if base is not None:
        roots.append(base)
    roots.append(settings.FIXTURES_DIR)
    candidates = []
    for root in roots:
        path = raw if raw.is_absolute() else root / raw
        candidates.extend([path, path.with_name(path.name + '.yaml')])
    for candidate in candidates:
        if candidate.is_file():
            return candidate.resolve()
    return raw


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        with path.open(encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigurationError(f"Cannot read config file {path}: {exc}") from exc
    if data.get('schema') != CONTROLLER_SCHEMA:
        raise ConfigurationError(f"{path}: expected schema {CONTROLLER_SCHEMA!r}, got {data.get('schema')!r}")
    return data


def build_cli_config(options: Dict[str, Any]) -> CliConfig:
    """Собрать CliConfig из файла конфигурации и флагов"""
    config_path = options.get('config')
    file_values: Dict[str, Any] = {}
    base: Optional[Path] = None
    if config_path:
        file_values = read_config_file(config_path)
        base = Path(config_path).resolve().parent
    elif Path(settings.DEFAULT_CONFIG_FILE).is_file():
        config_path = settings.DEFAULT_CONFIG_FILE
        file_values = read_config_file(config_path)
        base = Path(config_path).parent

    def pick(flag: str, key: Optional[str] = None, default: Any = None) -> Any:
        value = options.get(flag)
        if value is not None and value is not False:
            return value
        return file_values.get(key or flag, default)

    live = bool(options.get('live')) or file_values.get('transport') == TransportKind.LIVE.value
    models = options.get('models') or ([options['model']] if options.get('model') else None)
    if models is None:
        models = file_values.get('models') or []
    if isinstance(models, str):
        models = [name.strip() for name in models.split(',') if name.strip()]

    config = CliConfig(
        config_path=Path(config_path) if config_path else None,
        transport=TransportKind.LIVE if live else TransportKind.FIXTURE,
        fixtures=resolve_fixture_path(pick('fixtures', default=settings.BENCHMARK_FIXTURES), base),
        models_file=resolve_fixture_path(pick('models_file', default=settings.MODEL_CATALOG), base),
        models=tuple(models),
        environment=resolve_fixture_path(pick('environment', default=settings.ENVIRONMENT_FIXTURE), base),
        criteria=resolve_fixture_path(pick('criteria', default=settings.CRITERIA_FILE), base),
        intentions=resolve_fixture_path(pick('intentions', default=settings.INTENTIONS_FILE), base),
        endpoint=pick('endpoint', default=settings.LLM_ENDPOINT),
        seed=pick('seed'),
        repeat=int(pick('repeat', default=1)),
        concurrency=int(pick('concurrency', default=settings.LIVE_CONCURRENCY)),
        allow_real_shell=bool(pick('allow_real_shell', default=False)),
        format=pick('format', default='markdown'),
        limits=dict(file_values.get('limits') or {}),
        out=Path(options['out']) if options.get('out') else None,
        trace_out=Path(options['trace_out']) if options.get('trace_out') else None,
        trace_dir=Path(options['trace_dir']) if options.get('trace_dir') else None,
        verbosity=int(options.get('verbosity', 1)),
    )
    for key in LIMIT_KEYS:
        if options.get(key) is not None:
            config = replace(config, limits={**config.limits, key: options[key]})
    return config


def select_models(catalog: List[Any], names: Tuple[str, ...]) -> List[Any]:
    """Модели каталога по именам в указанном порядке; пусто - весь каталог"""
    if not names:
        return list(catalog)
    by_name = {model.model_name: model for model in catalog}
    missing = [name for name in names if name not in by_name]
    if missing:
        raise ConfigurationError(f"unknown model(s): {', '.join(missing)}; known: {', '.join(by_name)}")
    return [by_name[name] for name in names]
