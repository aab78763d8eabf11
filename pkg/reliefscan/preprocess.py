"""
Preprocessing chain applied to every heightmap before features are computed.

    validity_mask -> inpaint_missing -> (resample) -> normalize_u16

Inpainting runs on a temporary 8-bit copy scaled between robust percentiles
and only ever writes pixels that were missing; measured heights are copied
back untouched. No plane or tilt correction is applied anywhere.
"""

import logging
from typing import NamedTuple, Sequence

import cv2
import numpy as np

from reliefscan.evaluation.metrics import dice
from reliefscan.exceptions import InpaintError, ReliefscanException
from reliefscan.models.heightmap import (HeightMap, LabelMask, ValidityMask,
                                         check_same_shape)
from reliefscan.models.image import NormalizedImage

LOG = logging.getLogger('reliefscan.preprocess')

U16_MAX = 65535
U8_MAX = 255

DEFAULT_RADIUS = 3
DEFAULT_PERCENTILES = (0.5, 99.5)


def percentile(values: np.ndarray, q) -> np.ndarray:
    """Linear interpolation between closest ranks at position (n-1)*q/100."""
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValueError('percentile of an empty vector')
    return np.percentile(values, q, method='linear')


def round_half_away(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def validity_mask(h: HeightMap) -> ValidityMask:
    return ValidityMask.from_heightmap(h)


def robust_range(h: HeightMap, percentiles: Sequence[float] = DEFAULT_PERCENTILES):
    finite = h.z[np.isfinite(h.z)]
    if finite.size == 0:
        raise InpaintError('cannot inpaint {!r}: no finite pixels'.format(h))
    lo, hi = percentile(finite, list(percentiles))
    return float(lo), float(hi)


def inpaint_missing(h: HeightMap, radius_px: int = DEFAULT_RADIUS,
                    percentiles: Sequence[float] = DEFAULT_PERCENTILES) -> HeightMap:
    """
    Fill non-finite pixels with Telea's fast-marching method.

    The fill happens on an 8-bit map clamped to the robust band, so filled
    values never leave [lo, hi]. Originally finite pixels are restored
    bit-exactly afterwards.
    """
    if radius_px < 1:
        raise InpaintError('inpainting radius must be at least 1 pixel, not {}'.format(radius_px))

    valid = np.isfinite(h.z)
    lo, hi = robust_range(h, percentiles)
    missing = ~valid
    if not missing.any():
        return h.replace(z=h.z)

    z = np.array(h.z)
    if hi == lo:
        LOG.warning('Degenerate robust range %r on %r, filling %d missing pixels with the constant',
                    lo, h, int(missing.sum()))
        z[missing] = lo
        return h.replace(z=z)

    scaled = np.clip((np.where(valid, z, lo) - lo) / (hi - lo), 0.0, 1.0)
    q8 = np.floor(scaled * U8_MAX + 0.5).astype(np.uint8)
    mask = missing.astype(np.uint8) * 255

    filled = cv2.inpaint(q8, mask, float(radius_px), cv2.INPAINT_TELEA)

    back = lo + filled.astype(np.float64) / U8_MAX * (hi - lo)
    z[missing] = back[missing]
    LOG.debug('Inpainted %d pixels of %r in band [%r, %r]', int(missing.sum()), h, lo, hi)
    return h.replace(z=z)


def normalize_u16(h: HeightMap) -> NormalizedImage:
    """Min-max normalize the whole sample to [0, 1] and quantize to 16 bits."""
    if not h.is_complete:
        raise ReliefscanException('cannot normalize {!r}: inpaint missing pixels first'.format(h))

    z_min = float(h.z.min())
    z_max = float(h.z.max())
    if z_max == z_min:
        LOG.warning('Degenerate normalization range on %r (all heights %r), emitting zeros', h, z_min)
        return NormalizedImage(np.zeros(h.shape, dtype=np.uint16), h.pitch_um, z_min, z_max, degenerate=True)

    u = (h.z - z_min) / (z_max - z_min)
    u16 = round_half_away(np.clip(u, 0.0, 1.0) * U16_MAX).astype(np.uint16)
    return NormalizedImage(u16, h.pitch_um, z_min, z_max)


def prepare(h: HeightMap, radius_px: int = DEFAULT_RADIUS,
            percentiles: Sequence[float] = DEFAULT_PERCENTILES) -> NormalizedImage:
    return normalize_u16(inpaint_missing(h, radius_px, percentiles))


Missingness = NamedTuple('Missingness', [
    ('frac_total', float),
    ('frac_ink', float),
    ('frac_papyrus', float),
    ('dice_missing_vs_ink', float)
])


def missingness_stats(h_raw: HeightMap, labels: LabelMask) -> Missingness:
    check_same_shape(h_raw, labels, 'heightmap and labels')
    missing = ~np.isfinite(h_raw.z)
    ink = labels.ink
    papyrus = ~ink

    def fraction(region):
        total = np.count_nonzero(region)
        return float(np.count_nonzero(missing & region)) / total if total else 0.0

    return Missingness(
        frac_total=float(np.count_nonzero(missing)) / missing.size,
        frac_ink=fraction(ink),
        frac_papyrus=fraction(papyrus),
        dice_missing_vs_ink=dice(missing, ink)
    )
