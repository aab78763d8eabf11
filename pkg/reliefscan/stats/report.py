import csv
import io
import json
import logging
import os
from collections import OrderedDict
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from reliefscan.exceptions import (DegenerateStatistic, FormatError,
                                   StatisticsError)
from reliefscan.models.enums import Regime
from reliefscan.models.results import ResultTable
from reliefscan.models.stats import PairedMatrix
from reliefscan.preprocess import Missingness
from reliefscan.stats.summary import summarize
from reliefscan.stats.tests import (friedman, pages_l, pairwise_wilcoxon,
                                    wilcoxon_signed_rank)
from reliefscan.utils.format import custom_json_dumps, format_float

LOG = logging.getLogger('reliefscan.stats')

STATS_JSON = 'stats.json'

JSON = Dict[str, Any]


def paired_matrix(table: ResultTable, regime: Regime) -> PairedMatrix:
    """Subjects x pitches Dice grid, keeping only samples scored at every pitch."""
    samples, pitches, grid = table.pivot(regime)
    complete = np.all(np.isfinite(grid), axis=1)
    if not complete.all():
        dropped = [s for s, ok in zip(samples, complete) if not ok]
        LOG.warning('Dropping %d samples without a score at every pitch: %s', len(dropped), ', '.join(dropped))
    return PairedMatrix(grid[complete], pitches, [s for s, ok in zip(samples, complete) if ok])


def _notice(test: str, e: Exception) -> JSON:
    LOG.warning('%s not computed: %s', test, e)
    return {'method': test, 'notice': str(e)}


def analyze_regime(table: ResultTable, regime: Regime, n_perm: int = 9999, seed: int = 0, alpha: float = 0.05,
                   reference: float = 0.70) -> JSON:
    regime = Regime(regime)
    table = table.for_regime(regime)
    if not len(table):
        raise StatisticsError('no results for regime {}'.format(regime.value))

    pitches = table.pitches
    native = pitches[0]
    summaries = OrderedDict()  # type: OrderedDict[str, JSON]
    for pitch in pitches:
        s = summarize(table.dice_at(pitch))
        s['pitch_um'] = pitch
        s['above_reference'] = s['median'] > reference
        summaries[format_float(pitch)] = s

    result = OrderedDict([
        ('regime', regime.value),
        ('pitches_um', pitches),
        ('summaries', summaries),
        ('reference', reference),
        ('pitches_above_reference', [p for p in pitches if summaries[format_float(p)]['above_reference']])
    ])  # type: OrderedDict[str, Any]

    if len(pitches) < 2:
        result['tests'] = [{'method': 'omnibus', 'notice': 'single pitch, nothing to compare'}]
        return result

    try:
        m = paired_matrix(table, regime)
    except StatisticsError as e:
        result['tests'] = [_notice('omnibus', e)]
        return result

    native_col = m.column(native)
    for pitch in pitches:
        summaries[format_float(pitch)]['median_change_vs_native'] = float(np.median(m.column(pitch) - native_col))

    tests = []  # type: List[JSON]
    try:
        tests.append(friedman(m).serialize)
    except DegenerateStatistic as e:
        tests.append(_notice('friedman', e))
    # decreasing Dice with pitch is an increasing trend from coarsest to finest
    tests.append(pages_l(m, sorted(pitches, reverse=True), n_perm=n_perm, seed=seed).serialize)
    tests.append(pairwise_wilcoxon(m, alpha=alpha).serialize)
    result['tests'] = tests
    return result


def shift_vs(table: ResultTable, regime: Regime, baseline: Regime) -> JSON:
    """Per-pitch median paired Dice difference of regime against baseline."""
    a = table.for_regime(regime)
    b = table.for_regime(baseline)
    shifts = OrderedDict()  # type: OrderedDict[str, JSON]
    for pitch in a.pitches:
        x = {r.sample_id: r.dice for r in a if r.pitch_um == pitch}
        y = {r.sample_id: r.dice for r in b if r.pitch_um == pitch}
        common = sorted(set(x) & set(y))
        if not common:
            continue
        d = np.array([x[s] - y[s] for s in common])
        entry = {
            'n': len(common),
            'median_difference': float(np.median(d)),
            'median_shift': float(np.median([x[s] for s in common]) - np.median([y[s] for s in common]))
        }  # type: JSON
        try:
            w = wilcoxon_signed_rank([x[s] for s in common], [y[s] for s in common])
            entry.update(statistic=w.statistic, p_value=w.p_value)
        except StatisticsError as e:
            entry['notice'] = str(e)
        shifts[format_float(pitch)] = entry
    max_shift = max((abs(e['median_shift']) for e in shifts.values()), default=0.0)
    return {'regime': Regime(regime).value, 'baseline': Regime(baseline).value, 'per_pitch': shifts,
            'max_abs_median_shift': max_shift}


def lopo_table(table: ResultTable, papyri: Optional[Sequence[str]] = None) -> JSON:
    """Held-out Dice per papyrus plus pooled summaries."""
    table = table.for_regime(Regime.Lopo)
    if not len(table):
        raise StatisticsError('no leave-one-papyrus-out results')
    present = {r.papyrus_id for r in table}
    order = [p for p in papyri or [] if p in present]
    order += sorted(present - set(order))
    rows = OrderedDict()  # type: OrderedDict[str, JSON]
    for papyrus in order:
        scores = [r.dice for r in table if r.papyrus_id == papyrus]
        if scores:
            rows[papyrus] = summarize(scores)
    pooled = summarize([r.dice for r in table])
    pooled['mean_of_papyrus_means'] = float(np.mean([s['mean'] for s in rows.values()]))
    lowest = min(rows, key=lambda p: rows[p]['median'])
    return {'papyri': rows, 'pooled': pooled, 'lowest_median': lowest}


def missingness_report(rows: Sequence[Tuple[str, str, Missingness]], alpha: float = 0.05) -> JSON:
    """Is dropout concentrated on ink? Paired ink vs bare-papyrus fractions per sample."""
    if not rows:
        raise StatisticsError('no missingness rows')
    fields = Missingness._fields
    columns = {f: [getattr(m, f) for _, _, m in rows] for f in fields}
    report = OrderedDict([
        ('samples', [dict(sample_id=sid, papyrus_id=pid, **m._asdict()) for sid, pid, m in rows]),
        ('summaries', OrderedDict((f, summarize(columns[f])) for f in fields))
    ])  # type: OrderedDict[str, Any]
    try:
        w = wilcoxon_signed_rank(columns['frac_ink'], columns['frac_papyrus'])
        report['ink_vs_papyrus'] = dict(w.serialize, significant=w.p_value < alpha)
    except StatisticsError as e:
        report['ink_vs_papyrus'] = _notice('wilcoxon', e)
    report['max_dice_missing_vs_ink'] = max(columns['dice_missing_vs_ink'])
    return report


def analyze(tables: Dict[Regime, ResultTable], missingness: Sequence[Tuple[str, str, Missingness]] = None,
            papyri: Sequence[str] = None, **kwargs) -> JSON:
    n_perm = int(kwargs.get('n_perm', 9999))
    seed = int(kwargs.get('seed', 0))
    alpha = float(kwargs.get('alpha', 0.05))
    reference = float(kwargs.get('reference', 0.70))

    merged = ResultTable()
    for t in tables.values():
        merged.extend(t)

    analysis = OrderedDict()  # type: OrderedDict[str, Any]
    analysis['regimes'] = OrderedDict(
        (regime.value, analyze_regime(merged, regime, n_perm, seed, alpha, reference)) for regime in merged.regimes
    )
    if Regime.Matched in merged.regimes:
        analysis['shifts'] = [shift_vs(merged, r, Regime.Matched)
                              for r in (Regime.CrossRes, Regime.ZBin) if r in merged.regimes]
    if Regime.Lopo in merged.regimes:
        analysis['lopo'] = lopo_table(merged, papyri)
    if missingness:
        analysis['missingness'] = missingness_report(missingness, alpha)
    analysis['settings'] = {'n_perm': n_perm, 'seed': seed, 'alpha': alpha, 'reference': reference}
    return analysis


SUMMARY_COLUMNS = ['regime', 'pitch_um', 'n', 'median', 'q1', 'q3', 'mean', 'sd', 'median_change_vs_native',
                   'above_reference']
PAIRWISE_COLUMNS = ['regime', 'a', 'b', 'statistic', 'p_value', 'p_holm', 'median_difference', 'significant']


def _cell(value: Any) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _write_csv(path: str, header: List[str], rows: List[List[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(buf.getvalue())
    return path


def write_stats(analysis: JSON, out_dir: str) -> List[str]:
    """stats.json plus per-pitch summary and pairwise CSV tables; returns the paths written."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    path = os.path.join(out_dir, STATS_JSON)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(custom_json_dumps(analysis) + '\n')
    paths.append(path)

    summary_rows = []
    pairwise_rows = []
    for regime, result in analysis['regimes'].items():
        for s in result['summaries'].values():
            summary_rows.append([regime] + [s.get(c) for c in SUMMARY_COLUMNS[1:]])
        for test in result.get('tests', []):
            for pair in test.get('adjusted') or []:
                pairwise_rows.append([regime] + [pair[c] for c in PAIRWISE_COLUMNS[1:]])
    paths.append(_write_csv(os.path.join(out_dir, 'summary.csv'), SUMMARY_COLUMNS, summary_rows))
    paths.append(_write_csv(os.path.join(out_dir, 'pairwise.csv'), PAIRWISE_COLUMNS, pairwise_rows))

    if 'lopo' in analysis:
        rows = [[p] + [s[c] for c in ('n', 'median', 'q1', 'q3', 'mean', 'sd')]
                for p, s in analysis['lopo']['papyri'].items()]
        pooled = analysis['lopo']['pooled']
        rows.append(['pooled'] + [pooled[c] for c in ('n', 'median', 'q1', 'q3', 'mean', 'sd')])
        paths.append(_write_csv(os.path.join(out_dir, 'lopo_papyri.csv'),
                                ['papyrus_id', 'n', 'median', 'q1', 'q3', 'mean', 'sd'], rows))

    for path in paths:
        LOG.info('Wrote %s', path)
    return paths


def read_stats(path: str) -> JSON:
    if not os.path.isfile(path):
        raise FormatError('statistics not found; expected {} (run "reliefscan stats" first)'.format(path), path=path)
    with open(path, encoding='utf-8') as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(e.msg, path=path, line=e.lineno, column=e.colno)
