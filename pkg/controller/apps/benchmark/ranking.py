"""
Leading metrics: per intention, which model was fastest or slowest.

Counted once over all models and once over the non-proprietary ones.
Ties go to the model listed first.
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .records import BenchmarkReport

METRICS = (
    ('fastest', 'response_time_s', 'Fastest response time'),
    ('slowest', 'response_time_s', 'Slowest response time'),
    ('fastest', 'ttft_ms', 'Fastest time to first token'),
    ('slowest', 'ttft_ms', 'Slowest time to first token'),
)


@dataclass(frozen=True)
class LeadingRow:
    title: str
    direction: str
    metric: str
    all_models: Tuple[Tuple[str, int], ...]
    open_models: Tuple[Tuple[str, int], ...]


def _leaders(report: BenchmarkReport, models: List[str], metric: str, direction: str) -> Tuple[Tuple[str, int], ...]:
    counts: Dict[str, int] = {}
    for intention_id in report.intention_ids:
        means = []
        for model_name in models:
            runs = report.records_for(model_name, intention_id)
            if runs:
                means.append((sum(getattr(run, metric) for run in runs) / len(runs), model_name))
        if not means:
            continue
        pick = min if direction == 'fastest' else max
        best = pick(value for value, _ in means)
        leader = next(model_name for value, model_name in means if value == best)
        counts[leader] = counts.get(leader, 0) + 1
    order = {model_name: index for index, model_name in enumerate(models)}
    return tuple(sorted(counts.items(), key=lambda item: (-item[1], order[item[0]])))


def rank_leading_metrics(report: BenchmarkReport) -> List[LeadingRow]:
    models = report.model_names
    aggregates = report.aggregates
    open_models = [name for name in models if not aggregates[name].proprietary]
    return [
        LeadingRow(
            title=title,
            direction=direction,
            metric=metric,
            all_models=_leaders(report, models, metric, direction),
            open_models=_leaders(report, open_models, metric, direction),
        )
        for direction, metric, title in METRICS
    ]
