"""
Rank-based tests for related samples.

All statistics are computed on within-subject ranks with ties averaged, so
they are unchanged by any strictly increasing transform of a subject's row.
"""
import itertools
import logging
from typing import Any, Dict, List, Sequence

import numpy as np
from scipy import stats

from reliefscan.exceptions import DegenerateStatistic, StatisticsError
from reliefscan.models.stats import PairedMatrix, TestReport
from reliefscan.utils.rng import spawn_rngs

LOG = logging.getLogger('reliefscan.stats')

EXACT_MAX_N = 20
PERM_CHUNK = 1000


def within_subject_ranks(values: np.ndarray) -> np.ndarray:
    return stats.rankdata(values, method='average', axis=1)


def _tie_term(values: np.ndarray) -> float:
    """Sum of t^3 - t over every group of tied values."""
    _, counts = np.unique(values, return_counts=True)
    return float(np.sum(counts.astype(np.float64) ** 3 - counts))


def friedman(m: PairedMatrix) -> TestReport:
    n, k = m.n, m.k
    ranks = within_subject_ranks(m.values)
    rank_sums = ranks.sum(axis=0)

    chi2 = 12.0 / (n * k * (k + 1)) * np.sum(rank_sums ** 2) - 3.0 * n * (k + 1)
    correction = 1.0 - sum(_tie_term(row) for row in m.values) / (n * (k ** 3 - k))
    if correction <= 0:
        raise DegenerateStatistic('Friedman statistic undefined: every subject has identical values in all {} conditions'.format(k))
    chi2 /= correction
    p = float(stats.chi2.sf(chi2, k - 1))

    return TestReport(
        'friedman', chi2, min(1.0, p), n, k,
        extra={'df': k - 1, 'tie_correction': correction, 'rank_sums': rank_sums.tolist()}
    )


def pages_l(m: PairedMatrix, hypothesized_order: Sequence[Any], n_perm: int = 9999, seed: int = 0) -> TestReport:
    """
    Page's L for an increasing trend along hypothesized_order, with a
    one-sided Monte-Carlo p from within-subject permutations of the labels.
    """
    if n_perm < 1:
        raise StatisticsError('n_perm must be positive, not {}'.format(n_perm))
    m = m.reorder(hypothesized_order)
    n, k = m.n, m.k
    weights = np.arange(1, k + 1)

    # doubled ranks are integers, so L comparisons are exact
    ranks2 = np.rint(2 * within_subject_ranks(m.values)).astype(np.int64)
    l2_obs = int(np.sum(weights * ranks2.sum(axis=0)))

    exceed = 0
    chunks = -(-n_perm // PERM_CHUNK)
    for c, rng in enumerate(spawn_rngs(seed, chunks)):
        size = min(PERM_CHUNK, n_perm - c * PERM_CHUNK)
        order = rng.random((size, n, k)).argsort(axis=2)
        permuted = np.take_along_axis(np.broadcast_to(ranks2, (size, n, k)), order, axis=2)
        l2 = np.einsum('snk,k->s', permuted, weights)
        exceed += int(np.count_nonzero(l2 >= l2_obs))

    p = (exceed + 1) / (n_perm + 1)
    LOG.debug("Page's L=%s: %d of %d permutations at least as large", l2_obs / 2, exceed, n_perm)
    return TestReport(
        'pages_l', l2_obs / 2.0, p, n, k,
        extra={
            'order': list(hypothesized_order),
            'n_perm': n_perm,
            'seed': seed,
            'expected_l': n * k * (k + 1) ** 2 / 4.0
        }
    )


def _exact_lower_tail(ranks: np.ndarray, w: float) -> float:
    """P(W+ <= w) under random signs, counted over doubled realized ranks."""
    doubled = np.rint(2 * ranks).astype(np.int64)
    counts = np.zeros(int(doubled.sum()) + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled:
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:-r]
        counts = counts + shifted
    limit = int(np.rint(2 * w))
    return float(counts[:limit + 1].sum()) / float(2 ** len(doubled))


def wilcoxon_signed_rank(x: Sequence[float], y: Sequence[float], method: str = 'auto') -> TestReport:
    """
    Two-sided signed-rank test on x - y. Zero differences are dropped;
    exact for up to 20 non-zero differences, normal otherwise.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise StatisticsError('paired vectors must be 1D and equally long, got {} and {}'.format(x.shape, y.shape))
    if len(x) < 2:
        raise StatisticsError('signed-rank test needs at least 2 pairs, got {}'.format(len(x)))
    if method not in ('auto', 'exact', 'normal'):
        raise StatisticsError("unknown method '{}', choose from auto, exact, normal".format(method))

    d = x - y
    zeros = int(np.count_nonzero(d == 0))
    d = d[d != 0]
    if d.size == 0:
        raise DegenerateStatistic('all {} paired differences are zero'.format(len(x)))

    n = d.size
    ranks = stats.rankdata(np.abs(d), method='average')
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    w = min(w_plus, w_minus)

    exact = method == 'exact' or (method == 'auto' and n <= EXACT_MAX_N)
    if exact:
        p = 2.0 * _exact_lower_tail(ranks, w)
    else:
        mean = n * (n + 1) / 4.0
        var = n * (n + 1) * (2 * n + 1) / 24.0 - _tie_term(np.abs(d)) / 48.0
        delta = w - mean
        if delta < 0:
            delta = min(delta + 0.5, 0.0)
        p = 2.0 * float(stats.norm.cdf(delta / np.sqrt(var))) if var > 0 else 1.0

    return TestReport(
        'wilcoxon', w, min(1.0, p), n, 2,
        extra={
            'w_plus': w_plus,
            'w_minus': w_minus,
            'zeros_dropped': zeros,
            'exact': exact,
            'median_difference': float(np.median(x - y))
        }
    )


def holm_adjust(p: Sequence[float]) -> List[float]:
    """Holm step-down adjusted p-values in input order."""
    p = np.asarray(p, dtype=np.float64)
    if p.size == 0:
        return []
    if np.any((p < 0) | (p > 1)) or not np.all(np.isfinite(p)):
        raise StatisticsError('p-values must lie in [0, 1]')
    m = p.size
    order = np.argsort(p, kind='stable')
    stepped = np.minimum(1.0, (m - np.arange(m)) * p[order])
    adjusted = np.empty(m)
    adjusted[order] = np.maximum.accumulate(stepped)
    return adjusted.tolist()


def pairwise_wilcoxon(m: PairedMatrix, alpha: float = 0.05) -> TestReport:
    """Every pair of conditions, Holm-adjusted across the family."""
    pairs = list(itertools.combinations(range(m.k), 2))
    results = []  # type: List[Dict[str, Any]]
    for a, b in pairs:
        try:
            r = wilcoxon_signed_rank(m.values[:, a], m.values[:, b])
            results.append({'statistic': r.statistic, 'p_value': r.p_value,
                            'median_difference': r.extra['median_difference']})
        except DegenerateStatistic:
            results.append({'statistic': None, 'p_value': 1.0, 'median_difference': 0.0})

    adjusted = holm_adjust([r['p_value'] for r in results])
    rows = []
    for (a, b), r, p_holm in zip(pairs, results, adjusted):
        rows.append({
            'a': m.condition_order[a],
            'b': m.condition_order[b],
            'statistic': r['statistic'],
            'p_value': r['p_value'],
            'p_holm': p_holm,
            'median_difference': r['median_difference'],
            'significant': p_holm < alpha
        })
    smallest = min((r['p_holm'] for r in rows), default=1.0)
    return TestReport('wilcoxon_holm', len(rows), smallest, m.n, m.k, adjusted=rows, extra={'alpha': alpha})
