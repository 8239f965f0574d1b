"""
report: перерисовать сохранённые записи (json-отчёт bench) в другом формате.
"""

import logging
from pathlib import Path

from apps.benchmark.records import load_report
from apps.benchmark.reports import REPORT_FORMATS, render_report
from apps.cli.base import ControllerCommand

logger = logging.getLogger(__name__)


class Command(ControllerCommand):
    help = 'Render a saved JSON records file as markdown, csv, plot-data or json'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('records', help='JSON report written by "bench --format json"')
        parser.add_argument('--format', choices=REPORT_FORMATS, default='markdown')
        parser.add_argument('--out', help='Write to a file instead of stdout')

    def handle(self, *args, **options):
        report = load_report(options['records'])
        output = render_report(report, options['format'])
        if options.get('out'):
            target = Path(options['out'])
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(output, encoding='utf-8')
            logger.info(f"Wrote {options['format']} report to {target}")
        else:
            self.stdout.write(output, ending='')
