"""
bench: матрица (модель x намерение) и отчёт.

    python manage.py bench --fixtures paper.fixtures --out report.md
"""

import logging

from apps.benchmark.reports import REPORT_FORMATS, render_report
from apps.cli.base import ControllerCommand
from apps.cli.config import build_cli_config
from apps.cli.pipeline import build_runner, load_models, load_suite

logger = logging.getLogger(__name__)


class Command(ControllerCommand):
    help = 'Run every intention against every model and render the report'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--fixtures', help='Transcript fixture file (fixture mode)')
        parser.add_argument('--live', action='store_true', help='Query the live endpoint')
        parser.add_argument('--endpoint', help='Live endpoint base URL')
        parser.add_argument('--models', help='Comma-separated model names (default: whole catalog)')
        parser.add_argument('--out', help='Write the report to a file instead of stdout')
        parser.add_argument('--format', choices=REPORT_FORMATS, help='Report format')
        parser.add_argument('--repeat', type=int, help='Runs per (model, intention) pair')
        parser.add_argument('--seed', type=int, help='Random generator seed')
        parser.add_argument('--criteria', help='Success criteria file')
        parser.add_argument('--environment', help='Environment fixture file')
        parser.add_argument('--intentions', help='Intention suite file')
        parser.add_argument('--trace-dir', help='Write one JSONL trace per run into this directory')
        parser.add_argument('--concurrency', type=int, help='Parallel runs in live mode')
        parser.add_argument('--allow-real-shell', action='store_true',
                            help='Run shell() commands on this machine')
        self.add_limit_arguments(parser)

    def handle(self, *args, **options):
        config = build_cli_config(options).validate()
        intentions = load_suite(config)
        models = load_models(config)
        runner = build_runner(config)

        self.stderr.write(f"🏁 {len(models)} models x {len(intentions)} intentions x {config.repeat} "
                          f"({config.transport.value})")
        report = runner.run_matrix(intentions, models, repeat=config.repeat,
                                   concurrency=config.concurrency)
        output = render_report(report, config.format)

        if config.out is not None:
            config.out.parent.mkdir(parents=True, exist_ok=True)
            config.out.write_text(output, encoding='utf-8')
            logger.info(f"Wrote {config.format} report to {config.out}")
        else:
            self.stdout.write(output, ending='')
        if config.trace_dir is not None:
            report.write_traces(config.trace_dir)

        successes = sum(1 for record in report.records if record.success)
        self.stderr.write(self.style.SUCCESS(f"✅ {successes}/{len(report.records)} runs resolved"))
