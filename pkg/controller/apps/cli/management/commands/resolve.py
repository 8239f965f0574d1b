"""
resolve: одно намерение через весь конвейер.

    python manage.py resolve "Please sleep for 5 seconds" --model falcon-3-10b-instruct
"""

import logging

from apps.analysis.extraction import ParsedResponse
from apps.cli.base import VERBOSE, ControllerCommand
from apps.cli.config import build_cli_config
from apps.cli.pipeline import build_runner, load_models, load_suite
from apps.interpreter.trace import ConsoleTraceObserver
from apps.prompts.intentions import Intention, find_intention, match_intention
from core.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

AD_HOC_INTENTION_ID = 0


class Command(ControllerCommand):
    help = 'Resolve a single intention: prompt the model, run the workflow, print the outcome'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('intention', nargs='?', help='Intention text')
        parser.add_argument('--intention-id', type=int, help='Pick an intention of the suite by id')
        parser.add_argument('--fixtures', help='Transcript fixture file (fixture mode)')
        parser.add_argument('--live', action='store_true', help='Query the live endpoint')
        parser.add_argument('--endpoint', help='Live endpoint base URL')
        parser.add_argument('--model', help='Model name from the catalog')
        parser.add_argument('--environment', help='Environment fixture file')
        parser.add_argument('--criteria', help='Success criteria file')
        parser.add_argument('--intentions', help='Intention suite file')
        parser.add_argument('--trace-out', help='Write the execution trace as JSONL')
        parser.add_argument('--seed', type=int, help='Random generator seed')
        parser.add_argument('--allow-real-shell', action='store_true',
                            help='Run shell() commands on this machine')
        self.add_limit_arguments(parser)

    def _intention(self, config, options) -> Intention:
        suite = load_suite(config)
        if options.get('intention_id') is not None:
            return find_intention(suite, options['intention_id'])
        text = options.get('intention')
        if not text:
            raise ConfigurationError('give an intention text or --intention-id')
        matched = match_intention(text, suite)
        if matched is not None:
            return matched
        if not config.live:
            raise ConfigurationError(f"no fixture transcript can answer {text!r}; use a suite intention or --live")
        return Intention(AD_HOC_INTENTION_ID, text)

    def handle(self, *args, **options):
        config = build_cli_config(options).validate()
        intention = self._intention(config, options)
        models = load_models(config)
        if not models:
            raise ConfigurationError('the model catalog is empty')
        model = models[0]
        verbose = config.verbosity >= VERBOSE

        observers = [ConsoleTraceObserver(self.stdout.write)] if verbose else []
        runner = build_runner(
            config,
            observers=observers,
            env_overrides={
                'interactive': True,
                'input_fn': self.prompt,
                'output_fn': None if verbose else self.stdout.write,
            },
            real_time=config.live,
        )

        self.stdout.write(self.style.NOTICE(f"🎯 Intention {intention.id}: {intention.text}"))
        self.stdout.write(self.style.NOTICE(f"🤖 Model: {model.model_name} ({config.transport.value})"))
        outcome = runner.run_once(intention, model)
        record = outcome.record

        if verbose and isinstance(outcome.parsed, ParsedResponse):
            self.stdout.write('--- workflow ---')
            self.stdout.write(outcome.parsed.code)
            self.stdout.write('----------------')

        if outcome.trace is not None:
            trace = outcome.trace
            self.stdout.write(f"Trace: {trace.status.value}, {trace.steps_used} steps, "
                              f"{len(trace.calls)} calls ({', '.join(trace.called_names()) or '-'})")
            if config.trace_out is not None:
                config.trace_out.parent.mkdir(parents=True, exist_ok=True)
                config.trace_out.write_text(trace.to_jsonl(), encoding='utf-8')
                logger.info(f"Wrote trace to {config.trace_out}")
        if record.error:
            self.stdout.write(self.style.WARNING(f"Gateway error: {record.error}"))

        self.stdout.write(f"TTFT {record.ttft_ms:.1f} ms, response time {record.response_time_s:.2f} s")
        if record.success:
            variant = f" ({record.matched_variant})" if record.matched_variant else ''
            self.stdout.write(self.style.SUCCESS(f"✅ Resolved{variant}"))
        else:
            detail = f": {record.error_kind}" if record.error_kind else ''
            self.stdout.write(self.style.ERROR(f"❌ Not resolved: {record.failure_reason.value}{detail}"))
