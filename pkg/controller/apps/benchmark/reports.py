"""
Report renderers (Strategy): markdown, csv, plot-data, json.

Output is a pure function of the records, so fixture reports are
byte-identical across runs.
"""

import csv
import io
import json
from abc import ABC, abstractmethod
from typing import Callable, List

from core.patterns.strategy import StrategyRegistry

from .exceptions import UnknownFormat
from .ranking import rank_leading_metrics
from .records import RECONSTRUCTION_LABEL, BenchmarkReport, RunRecord

CHECK = '✓'
CROSS = '✗'


class ReportRenderer(ABC):
    """Интерфейс стратегии рендеринга"""

    @abstractmethod
    def render(self, report: BenchmarkReport) -> str:
        pass


renderers: StrategyRegistry = StrategyRegistry('report format', UnknownFormat)


def _table(header: List[str], rows: List[List[str]]) -> List[str]:
    lines = [
        '| ' + ' | '.join(header) + ' |',
        '|' + '|'.join('---' for _ in header) + '|',
    ]
    lines.extend('| ' + ' | '.join(row) + ' |' for row in rows)
    return lines


def _format_leaders(leaders) -> str:
    return ', '.join(f"{name} ({count})" for name, count in leaders) or '-'


@renderers.register('markdown')
class MarkdownRenderer(ReportRenderer):
    """Таблицы: решения, преамбулы, комментарии, время, лидеры, причины"""

    def _flag_grid(self, report: BenchmarkReport, flag: Callable[[RunRecord], bool],
                   total_title: str, with_failures: bool = False) -> List[str]:
        intention_ids = report.intention_ids
        header = ['Model'] + [str(intention_id) for intention_id in intention_ids] + [total_title]
        if with_failures:
            header.append(CROSS)
        repeats = report.repeats
        rows = []
        for model_name in report.model_names:
            row = [model_name]
            total = runs = 0
            for intention_id in intention_ids:
                records = report.records_for(model_name, intention_id)
                hits = sum(1 for record in records if flag(record))
                total += hits
                runs += len(records)
                if repeats == 1:
                    row.append(CHECK if hits else CROSS)
                else:
                    row.append(f"{hits}/{len(records)}")
            row.append(str(total))
            if with_failures:
                row.append(str(runs - total))
            rows.append(row)
        return _table(header, rows)

    def render(self, report: BenchmarkReport) -> str:
        aggregates = report.aggregates
        reconstruction = report.label == RECONSTRUCTION_LABEL
        timing_note = '[^timings]' if reconstruction else ''

        lines = ['# Intention resolution benchmark', '']
        lines.append(f"Source: {report.label}; {len(report.records)} runs, "
                     f"{len(report.model_names)} models, {len(report.intention_ids)} intentions.")
        lines += ['', '## Successful resolutions', '']
        lines += self._flag_grid(report, lambda record: record.success, CHECK, with_failures=True)
        lines += ['', '## Preamble / postamble inclusion', '']
        lines += self._flag_grid(report, lambda record: record.has_prose, 'Total')
        lines += ['', '## Comment inclusion[^comments]', '']
        lines += self._flag_grid(report, lambda record: record.has_comments, 'Total')

        lines += ['', f"## Average response time and time to first token{timing_note}", '']
        lines += _table(
            ['Model', 'Avg response time (s)', 'Avg TTFT (ms)[^ttft]'],
            [[name, f"{aggregate.avg_response_time_s:.2f}", f"{aggregate.avg_ttft_ms:.1f}"]
             for name, aggregate in aggregates.items()],
        )

        lines += ['', f"## Leading metrics{timing_note}", '']
        lines += _table(
            ['Metric', 'All models', 'Non-proprietary models'],
            [[row.title, _format_leaders(row.all_models), _format_leaders(row.open_models)]
             for row in rank_leading_metrics(report)],
        )

        failures = [record for record in report.records if not record.success]
        lines += ['', '## Failure reasons', '']
        if failures:
            lines += _table(
                ['Model', 'Intention', 'Reason', 'Error'],
                [[record.model_name, str(record.intention_id), record.failure_reason.value,
                  record.error_kind or '-'] for record in failures],
            )
        else:
            lines.append('No failures.')

        lines.append('')
        if reconstruction:
            lines.append('[^timings]: Timings come from replayed fixture transcripts whose chunk '
                         'offsets are a reconstruction, not a measurement.')
        lines.append('[^ttft]: Time to first token is measured from request send to the first '
                     'non-empty streamed chunk.')
        lines.append('[^comments]: Docstrings count as comments.')
        return '\n'.join(lines) + '\n'


@renderers.register('csv')
class CsvRenderer(ReportRenderer):
    COLUMNS = (
        'model_name', 'intention_id', 'repetition', 'success', 'failure_reason',
        'has_preamble', 'has_postamble', 'has_comments', 'ttft_ms', 'response_time_s',
        'trace_ref', 'error_kind',
    )

    def render(self, report: BenchmarkReport) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=self.COLUMNS, lineterminator='\n', extrasaction='ignore')
        writer.writeheader()
        for record in report.records:
            writer.writerow(record.to_dict())
        return buffer.getvalue()


@renderers.register('plot-data')
class PlotDataRenderer(ReportRenderer):
    """Серии метрик по (модель, намерение) для внешних графиков"""

    def render(self, report: BenchmarkReport) -> str:
        series = [
            {
                'model': record.model_name,
                'intention_id': record.intention_id,
                'repetition': record.repetition,
                'ttft_ms': record.ttft_ms,
                'response_time_s': record.response_time_s,
            }
            for record in report.records
        ]
        return json.dumps({'label': report.label, 'series': series}, indent=2, sort_keys=True,
                          ensure_ascii=False) + '\n'


@renderers.register('json')
class JsonRenderer(ReportRenderer):
    """Полные записи; читается обратно через load_records"""

    def render(self, report: BenchmarkReport) -> str:
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + '\n'


REPORT_FORMATS = tuple(renderers.names())


def render_report(report: BenchmarkReport, format: str = 'markdown') -> str:
    """
    Raises:
        UnknownFormat: формат не зарегистрирован
    """
    renderer_class = renderers.get(format)
    return renderer_class().render(report)
