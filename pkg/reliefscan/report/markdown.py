from typing import Any, Dict, List

from reliefscan.stats.summary import format_summary
from reliefscan.utils.format import format_float

JSON = Dict[str, Any]

TITLES = {
    'matched': 'Pixel size sensitivity (matched resolution)',
    'cross_res': 'Model trained at native pitch',
    'zbin': 'Z-binned test inputs',
    'lopo': 'Leave one papyrus out'
}


def _p(value: float) -> str:
    return '{:.2g}'.format(value) if value < 0.001 else '{:.3f}'.format(value)


def _test_line(test: JSON) -> str:
    if 'notice' in test:
        return '- {}: not computed ({})'.format(test['method'], test['notice'])
    if test['method'] == 'friedman':
        return '- Friedman chi2 = {:.2f} (df {}), p = {}'.format(test['statistic'], test['extra']['df'],
                                                                 _p(test['p_value']))
    if test['method'] == 'pages_l':
        return "- Page's L = {:g}, one-sided p = {} ({} permutations)".format(
            test['statistic'], _p(test['p_value']), test['extra']['n_perm'])
    if test['method'] == 'wilcoxon_holm':
        pairs = test['adjusted'] or []
        hits = sum(1 for p in pairs if p['significant'])
        return '- Pairwise Wilcoxon with Holm correction: {} of {} contrasts significant at alpha {}'.format(
            hits, len(pairs), test['extra']['alpha'])
    return '- {}: statistic {}, p = {}'.format(test['method'], test['statistic'], _p(test['p_value']))


def regime_section(result: JSON) -> List[str]:
    lines = ['## {}'.format(TITLES.get(result['regime'], result['regime'])), '',
             '| Pixel size (um) | n | Median [Q1, Q3]; mean ± s.d. | Median change vs native |',
             '|---|---|---|---|']
    for s in result['summaries'].values():
        change = s.get('median_change_vs_native')
        lines.append('| {} | {} | {} | {} |'.format(
            format_float(s['pitch_um']), s['n'], format_summary(s),
            '' if change is None else '{:+.3f}'.format(change)))
    lines.append('')
    above = result['pitches_above_reference']
    lines.append('Median Dice above {}: {}'.format(
        result['reference'], ', '.join(format_float(p) for p in above) + ' um' if above else 'none'))
    lines.append('')
    lines.extend(_test_line(t) for t in result.get('tests', []))
    lines.append('')
    return lines


def render_markdown(analysis: JSON, artifacts: List[str] = None) -> str:
    lines = ['# Topographic ink detection results', '']
    for result in analysis['regimes'].values():
        lines.extend(regime_section(result))

    for shift in analysis.get('shifts', []):
        lines.extend(['## {} against matched'.format(TITLES.get(shift['regime'], shift['regime'])), '',
                      'Largest absolute median shift: {:.3f}'.format(shift['max_abs_median_shift']), ''])

    if 'lopo' in analysis:
        lopo = analysis['lopo']
        lines.extend(['## Held-out papyri', '', '| Papyrus | n | Median [Q1, Q3]; mean ± s.d. |', '|---|---|---|'])
        for papyrus, s in lopo['papyri'].items():
            lines.append('| {} | {} | {} |'.format(papyrus, s['n'], format_summary(s)))
        pooled = lopo['pooled']
        lines.append('| pooled | {} | {} |'.format(pooled['n'], format_summary(pooled)))
        lines.extend(['', 'Mean of papyrus means: {:.3f}; lowest median: {}'.format(
            pooled['mean_of_papyrus_means'], lopo['lowest_median']), ''])

    if 'missingness' in analysis:
        miss = analysis['missingness']
        lines.extend(['## Missing measurements', ''])
        for field, s in miss['summaries'].items():
            lines.append('- {}: {}'.format(field, format_summary(s, digits=4)))
        test = miss['ink_vs_papyrus']
        if 'notice' in test:
            lines.append('- ink vs papyrus: not computed ({})'.format(test['notice']))
        else:
            lines.append('- ink vs papyrus (Wilcoxon): W = {:g}, p = {}'.format(test['statistic'], _p(test['p_value'])))
        lines.append('')

    if artifacts:
        lines.extend(['## Artifacts', ''] + ['- {}'.format(a) for a in artifacts] + [''])
    return '\n'.join(lines)
