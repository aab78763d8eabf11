"""
Multiscale topographic features computed on a normalized heightmap.

For every Gaussian scale s the stack holds the smoothed height, its
gradient magnitude, the local standard deviation of the residual
(height minus smoothed height) and the Laplacian of the smoothed height.
Kernels are truncated at 3 sigma and edges are clamped.
"""
import logging
from typing import List, Sequence, Tuple

import numpy as np
from scipy import ndimage

from reliefscan.exceptions import SegmenterError
from reliefscan.models.image import NormalizedImage
from reliefscan.models.segmenter import FeatureStack

LOG = logging.getLogger('reliefscan.segment')

TRUNCATE = 3.0
MODE = 'nearest'


def kernel_support(scale_px: float) -> int:
    return 2 * int(TRUNCATE * scale_px + 0.5) + 1


def scales_for_shape(shape: Tuple[int, int], scales_px: Sequence[int]) -> List[int]:
    """Scales whose kernel support fits inside the grid."""
    return [s for s in scales_px if kernel_support(s) <= min(shape)]


def _smooth(a: np.ndarray, scale_px: float) -> np.ndarray:
    return ndimage.gaussian_filter(a, scale_px, mode=MODE, truncate=TRUNCATE)


def extract_features(img: NormalizedImage, scales_px: Sequence[int] = (1, 2, 4, 8, 16)) -> FeatureStack:
    scales_px = [int(s) for s in scales_px]
    if not scales_px or any(s < 1 for s in scales_px):
        raise SegmenterError('feature scales must be positive pixel counts, got {}'.format(scales_px))
    largest = kernel_support(max(scales_px))
    if min(img.shape) < largest:
        raise SegmenterError('image {}x{} is smaller than the largest kernel support {} px'.format(
            img.width, img.height, largest))

    u = img.unit
    # centre on the median so flat images give exactly zero derived features
    median = float(np.median(u))
    v = u - median

    smooth, gradient, roughness, laplacian = [], [], [], []
    for s in scales_px:
        g = _smooth(v, s)
        gy, gx = np.gradient(g)
        r = v - g
        local_var = _smooth(r * r, s) - _smooth(r, s) ** 2

        smooth.append(g + median)
        gradient.append(np.hypot(gx, gy))
        roughness.append(np.sqrt(np.maximum(local_var, 0.0)))
        laplacian.append(ndimage.laplace(g, mode=MODE))

    features = np.stack([u] + smooth + gradient + roughness + laplacian)
    return FeatureStack(features, scales_px)
