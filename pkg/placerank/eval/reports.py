__all__ = [
    'CSV_COLUMNS', 'report_basename', 'write_stream', 'write_run_report', 'write_sweep_reports', 'write_plot_data',
]

import csv
import json
import logging
from datetime import datetime, timezone

UTC = timezone.utc  # alias of datetime.UTC (3.11+)
from pathlib import Path
from typing import Any, Dict, Iterable, List

from placerank.eval.experiment import ExperimentResult
from placerank.eval.recall import REPORTED_NS
from placerank.eval.sweep import SweepPoint, SweepTable


logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    'method', 'axis', 'value', 'repeat', 'recall@1', 'recall@5', 'recall@10', 'recall@30', 'mean_refine_us',
    'p95_refine_us',
]
DETERMINISTIC_STAMP = 'deterministic'


def report_basename(experiment: str, axis: str, deterministic: bool = False) -> str:
    """
    Report file stem: {experiment}-{axis}-{timestamp}.

    :arg experiment: Experiment name.
    :arg axis: Axis label (`/` in two-axis labels becomes `+`).
    :param deterministic: Pin the timestamp so reruns overwrite the same files.
    :return: File stem.
    """
    stamp = DETERMINISTIC_STAMP if deterministic else datetime.now(UTC).strftime('%Y%m%dT%H%M%SZ')
    return f'{experiment}-{axis.replace("/", "+")}-{stamp}'


def _dump(data: Any, path: Path) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + '\n', encoding='utf-8')


def write_stream(stream: Iterable[Dict[str, Any]], path: str | Path) -> Path:
    """
    Writes a JSON-Lines result stream.

    :arg stream: Result records.
    :arg path: Output file.
    :return: The path written.
    """
    path = Path(path)
    with path.open('w', encoding='utf-8') as handle:
        for record in stream:
            handle.write(json.dumps(record, sort_keys=True) + '\n')
    return path


def write_run_report(
        result: ExperimentResult,
        out_dir: str | Path,
        name: str,
        config: Dict[str, Any] | None = None,
) -> Dict[str, Path]:
    """
    Writes the result stream and the JSON report of one run.

    :arg result: ExperimentResult instance.
    :arg out_dir: Output directory.
    :arg name: File stem.
    :param config: Effective configuration to record.
    :return: Paths written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    paths = {'stream': out_dir / f'{name}.results.jsonl', 'report': out_dir / f'{name}.json'}
    write_stream(result.stream, paths['stream'])
    recall = result.recall.to_dict() if result.recall is not None else None
    _dump({'recall': recall, 'timing': result.timing.to_dict(), 'config': config or {}}, paths['report'])

    logger.info('Wrote run report %s', paths['report'])
    return paths


def _csv_row(point: SweepPoint) -> Dict[str, Any]:
    row = {'method': point.method, 'axis': point.axis, 'value': point.value, 'repeat': point.repeat}
    for n in REPORTED_NS:
        row[f'recall@{n}'] = f'{point.recall.recall_at.get(n, 0.0):.6f}'
    row['mean_refine_us'] = f'{point.timing.mean_refine_us:.3f}'
    row['p95_refine_us'] = f'{point.timing.p95_refine_us:.3f}'
    return row


def write_sweep_reports(table: SweepTable, out_dir: str | Path, name: str) -> Dict[str, Path]:
    """
    Writes the sweep CSV (one mean row per configuration) and the full JSON.

    :arg table: SweepTable instance.
    :arg out_dir: Output directory.
    :arg name: File stem.
    :return: Paths written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {'csv': out_dir / f'{name}.csv', 'json': out_dir / f'{name}.json'}

    with paths['csv'].open('w', encoding='utf-8', newline='') as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator='\n')
        writer.writeheader()
        writer.writerows(_csv_row(point) for point in table.means)

    _dump(table.to_dict(), paths['json'])

    logger.info('Wrote sweep reports %s (%d rows)', paths['csv'], len(table.means))
    return paths


def write_plot_data(table: SweepTable, out_dir: str | Path, name: str) -> List[Path]:
    """
    Writes one whitespace separated series file per reported N: the axis
    value(s) followed by the mean recall.

    :arg table: SweepTable instance.
    :arg out_dir: Output directory.
    :arg name: File stem.
    :return: Paths written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    for n in REPORTED_NS:
        path = out_dir / f'{name}-recall@{n}.xy'
        lines = [f'# {table.spec.axis_label.replace("/", " ")} recall@{n}']
        lines += [f'{point.value.replace("/", " ")} {point.recall.recall_at.get(n, 0.0):.6f}' for point in table.means]
        path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
        paths.append(path)

    return paths
