import numpy as np

from reliefscan.exceptions import DimensionMismatch


def dice(a: np.ndarray, b: np.ndarray) -> float:
    """
    Overlap 2|a & b| / (|a| + |b|) between two boolean masks.

    Two empty masks agree perfectly and score 1.0.
    """
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape:
        raise DimensionMismatch('masks have different dimensions: {} vs {}'.format(a.shape, b.shape))

    total = int(np.count_nonzero(a)) + int(np.count_nonzero(b))
    if total == 0:
        return 1.0
    return 2.0 * int(np.count_nonzero(a & b)) / total
