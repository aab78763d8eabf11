from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from reliefscan.exceptions import StatisticsError


class PairedMatrix:
    """n subjects x k related conditions; every subject observed in every condition."""

    def __init__(self, values: np.ndarray, condition_order: Sequence[Any], subjects: Optional[Sequence[str]] = None) -> None:
        values = np.array(values, dtype=np.float64)
        if values.ndim != 2:
            raise StatisticsError('paired values must be a subjects x conditions grid')
        n, k = values.shape
        if n < 2 or k < 2:
            raise StatisticsError('paired matrix needs at least 2 subjects and 2 conditions, got {}x{}'.format(n, k))
        if not np.isfinite(values).all():
            raise StatisticsError('paired matrix has missing cells; every subject must appear in every condition')
        if len(condition_order) != k:
            raise StatisticsError('{} condition labels for {} columns'.format(len(condition_order), k))

        self.values = values
        self.condition_order = list(condition_order)
        self.subjects = list(subjects) if subjects is not None else [str(i) for i in range(n)]

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.values.shape[1]

    def column(self, label: Any) -> np.ndarray:
        return self.values[:, self.condition_order.index(label)]

    def reorder(self, order: Sequence[Any]) -> 'PairedMatrix':
        if sorted(map(str, order)) != sorted(map(str, self.condition_order)) or len(order) != self.k:
            raise StatisticsError('hypothesized order {} is not a permutation of conditions {}'.format(
                list(order), self.condition_order))
        idx = [self.condition_order.index(c) for c in order]
        return PairedMatrix(self.values[:, idx], list(order), self.subjects)

    def __repr__(self):
        return 'PairedMatrix(n={!r}, k={!r}, conditions={!r})'.format(self.n, self.k, self.condition_order)


class TestReport:

    __test__ = False  # not a pytest test class

    def __init__(self, method: str, statistic: float, p_value: float, n: int, k: int = 2, **kwargs) -> None:
        self.method = method
        self.statistic = float(statistic)
        self.p_value = float(p_value)
        self.n = n
        self.k = k
        self.adjusted = kwargs.get('adjusted', None)  # type: Optional[List[Dict[str, Any]]]
        self.summaries = kwargs.get('summaries', None)  # type: Optional[Dict[str, Dict[str, float]]]
        self.extra = kwargs.get('extra', None) or dict()  # type: Dict[str, Any]

    @property
    def serialize(self) -> Dict[str, Any]:
        return {
            'method': self.method,
            'statistic': self.statistic,
            'p_value': self.p_value,
            'n': self.n,
            'k': self.k,
            'adjusted': self.adjusted,
            'summaries': self.summaries,
            'extra': self.extra
        }

    def __repr__(self):
        return 'TestReport(method={!r}, statistic={!r}, p_value={!r}, n={!r}, k={!r})'.format(
            self.method, self.statistic, self.p_value, self.n, self.k
        )
