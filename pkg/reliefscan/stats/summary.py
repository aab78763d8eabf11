from typing import Any, Dict, Sequence

import numpy as np

from reliefscan.exceptions import StatisticsError
from reliefscan.preprocess import percentile


def summarize(values: Sequence[float]) -> Dict[str, Any]:
    """Median [Q1, Q3] and mean with sample standard deviation."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise StatisticsError('cannot summarize an empty vector')
    q1, median, q3 = percentile(values, [25, 50, 75])
    single = values.size == 1
    return {
        'n': int(values.size),
        'median': float(median),
        'q1': float(q1),
        'q3': float(q3),
        'mean': float(values.mean()),
        'sd': 0.0 if single else float(values.std(ddof=1)),
        'sd_undefined': single
    }


def format_summary(s: Dict[str, Any], digits: int = 3) -> str:
    """'0.890 [0.850, 0.920]; 0.880 ± 0.030'"""
    fmt = '{:.%df}' % digits
    return '{} [{}, {}]; {} ± {}'.format(*(fmt.format(s[key]) for key in ('median', 'q1', 'q3', 'mean', 'sd')))
