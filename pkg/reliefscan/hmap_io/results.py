import csv
import io
import logging
import os
from typing import Iterable, List, Tuple

from reliefscan.exceptions import FormatError
from reliefscan.models.enums import Regime
from reliefscan.models.manifest import Sample
from reliefscan.models.results import COLUMNS, ResultRow, ResultTable
from reliefscan.preprocess import Missingness
from reliefscan.utils.format import format_float

LOG = logging.getLogger('reliefscan.hmap_io')


def dump_results(table: ResultTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(COLUMNS)
    for r in table:
        writer.writerow([
            r.sample_id,
            r.papyrus_id,
            r.regime.value,
            format_float(r.pitch_um),
            format_float(r.dice),
            r.fold,
            r.model_id
        ])
    return buf.getvalue()


def write_results(table: ResultTable, path) -> None:
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(dump_results(table))
    LOG.info('Wrote %d result rows to %s', len(table), path)


def read_results(path) -> ResultTable:
    if not os.path.isfile(path):
        raise FormatError('result table not found; expected {}'.format(path), path=path)
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != COLUMNS:
            raise FormatError('result header must be {}'.format(','.join(COLUMNS)), path=path, line=1)
        table = ResultTable()
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(COLUMNS):
                raise FormatError('expected {} columns, got {}'.format(len(COLUMNS), len(row)), path=path, line=lineno)
            try:
                table.add(ResultRow(
                    sample_id=row[0],
                    papyrus_id=row[1],
                    regime=Regime(row[2]),
                    pitch_um=float(row[3]),
                    dice=float(row[4]),
                    fold=int(row[5]),
                    model_id=row[6]
                ))
            except ValueError as e:
                raise FormatError(str(e), path=path, line=lineno)
    return table


MISSINGNESS_COLUMNS = ['sample_id', 'papyrus_id', 'frac_total', 'frac_ink', 'frac_papyrus', 'dice_missing_vs_ink']


def write_missingness(rows: Iterable[Tuple[Sample, Missingness]], path) -> None:
    """Per-sample dropout fractions over the whole map, ink and bare papyrus."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(MISSINGNESS_COLUMNS)
    count = 0
    for sample, m in rows:
        writer.writerow([sample.sample_id, sample.papyrus_id] + [format_float(v) for v in m])
        count += 1
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(buf.getvalue())
    LOG.info('Wrote missingness for %d samples to %s', count, path)


def read_missingness(path) -> List[Tuple[str, str, Missingness]]:
    if not os.path.isfile(path):
        raise FormatError('missingness table not found; expected {}'.format(path), path=path)
    rows = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.reader(f)
        if next(reader, None) != MISSINGNESS_COLUMNS:
            raise FormatError('missingness header must be {}'.format(','.join(MISSINGNESS_COLUMNS)), path=path, line=1)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(MISSINGNESS_COLUMNS):
                raise FormatError('expected {} columns, got {}'.format(len(MISSINGNESS_COLUMNS), len(row)),
                                  path=path, line=lineno)
            try:
                rows.append((row[0], row[1], Missingness(*(float(v) for v in row[2:]))))
            except ValueError as e:
                raise FormatError(str(e), path=path, line=lineno)
    return rows
