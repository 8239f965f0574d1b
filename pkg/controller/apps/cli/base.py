"""
ControllerCommand - общая основа management-команд контроллера.

Переводит ошибки конфигурации в код выхода 2, непредвиденные - в 1;
уровень логов задаётся --verbosity (0 - WARNING, 2 и выше - DEBUG).
"""

import logging
import sys

from django.core.management.base import BaseCommand, CommandError

from core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIGURATION = 2

VERBOSE = 2


class ControllerCommand(BaseCommand):
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Controller YAML config (default: fixtures/controller.yaml)')

    @staticmethod
    def add_limit_arguments(parser):
        parser.add_argument('--max-steps', type=int, help='Interpreter step limit')
        parser.add_argument('--max-call-depth', type=int, help='Nested call limit')
        parser.add_argument('--max-wall-time', type=float, help='Wall time limit in seconds')
        parser.add_argument('--max-value-size', type=int, help='Largest string, list or integer size')

    def execute(self, *args, **options):
        root = logging.getLogger()
        previous_level = root.level
        verbosity = options.get('verbosity', 1)
        if verbosity >= VERBOSE:
            root.setLevel(logging.DEBUG)
        elif verbosity == 0:
            root.setLevel(logging.WARNING)

        try:
            return super().execute(*args, **options)
        except CommandError:
            raise
        except ConfigurationError as exc:
            logger.error(f"❌ Configuration error: {exc}")
            raise CommandError(str(exc), returncode=EXIT_CONFIGURATION) from exc
        except Exception as exc:
            logger.exception(f"💥 Unexpected failure: {exc}")
            raise CommandError(f"Unexpected error: {type(exc).__name__}: {exc}", returncode=EXIT_FAILURE) from exc
        finally:
            root.setLevel(previous_level)

    def prompt(self, question: str) -> str:
        """Вопрос пользователю в терминале (ask_question в интерактивном режиме)"""
        self.stdout.write(self.style.NOTICE(f"❓ {question}"), ending='')
        self.stdout.flush()
        line = sys.stdin.readline()
        if not line:
            raise ConfigurationError('no answer on standard input')
        return line.rstrip('\n')
