"""
Running one experiment for several values of a configuration parameter
"""
import csv
import json
import logging
import math
from typing import List, NamedTuple, Optional, Sequence, Any

from .._concurrent.basics import settle, thread_budget
from .._concurrent.failures import Failures
from .config import ExperimentConfig
from .experiments import run
from .output import Output


logger = logging.getLogger(__name__)


class SweepRow(NamedTuple):
    """The summary of one sweep value, or the error it raised"""
    value: Any
    summary: Optional[dict]
    error: Optional[Exception]

    @property
    def failed(self) -> bool:
        return self.error is not None


def parse_values(text: str) -> List[Any]:
    """Split ``a,b,c`` into JSON scalars, keeping unparsable items as strings"""
    values = []
    for item in text.split(','):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(json.loads(item))
        except json.JSONDecodeError:
            values.append(item)
    return values


def _scalar_columns(summary: dict) -> List[str]:
    return [
        key for key, value in sorted(summary.items())
        if isinstance(value, (int, float, bool)) or value is None
    ]


def _cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return '%.16e' % value if math.isfinite(value) else repr(value)
    return str(value)


def sweep(config: ExperimentConfig, parameter: str, values: Sequence[Any],
          output: Output, threads: Optional[int] = None) -> List[SweepRow]:
    """
    Run the experiment of ``config`` once per value of ``parameter``

    :param parameter: dotted path of a scalar, e.g. ``train.family.v_sharp``
    :param values: the values to substitute
    :param output: receives ``sweep.csv`` and one subdirectory per row
    :return: one :py:class:`~.SweepRow` per value, in order

    Rows run concurrently up to the thread budget and failing rows do not
    stop the others; they are marked in the table.
    """
    config.value(parameter)
    configs = [config.with_value(parameter, value) for value in values]
    budget = thread_budget(threads)
    inner = 1 if budget > 1 and len(configs) > 1 else budget

    def activity(index: int, row_config: ExperimentConfig):
        def row():
            return run(row_config, output.sub('row_%02d' % index), inner)
        return row

    outcomes = settle(
        *(activity(index, row_config) for index, row_config in enumerate(configs)),
        threads=budget,
    )
    rows = [
        SweepRow(value, outcome.value, outcome.error)
        for value, outcome in zip(values, outcomes)
    ]
    columns = []
    for row in rows:
        if not row.failed:
            columns.extend(
                key for key in _scalar_columns(row.summary) if key not in columns
            )
    path = output.path('sweep.csv')
    with path.open('w', encoding='utf-8', newline='') as stream:
        writer = csv.writer(stream)
        writer.writerow([parameter, 'status'] + columns + ['error'])
        for row in rows:
            cells = [_cell(row.value), 'failed' if row.failed else 'ok']
            cells += [
                '' if row.failed else _cell(row.summary.get(key)) for key in columns
            ]
            cells.append('' if not row.failed else str(row.error))
            writer.writerow(cells)
    logger.info('wrote %d sweep rows to %s', len(rows), path)
    return rows


def sweep_failures(rows: Sequence[SweepRow]) -> Optional[Failures]:
    """All row errors as one :py:class:`~.Failures`, if any row failed"""
    errors = [row.error for row in rows if row.failed]
    return Failures(*errors) if errors else None
