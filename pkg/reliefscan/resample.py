import logging
from decimal import Decimal
from typing import List, Sequence

import numpy as np

from reliefscan.exceptions import ResampleError
from reliefscan.models.heightmap import HeightMap, LabelMask

LOG = logging.getLogger('reliefscan.resample')

DEFAULT_KERNELS = [1, 2, 3, 4, 6, 8, 10, 16, 32]


def scale_pitch(pitch_um: float, n: int) -> float:
    """n x pitch computed on the shortest decimal form, so 3 x 0.34 is 1.02."""
    return float(Decimal(repr(float(pitch_um))) * int(n))


class PitchLadder:

    def __init__(self, kernels: Sequence[int] = None, native_pitch_um: float = 0.34) -> None:
        kernels = list(DEFAULT_KERNELS if kernels is None else kernels)
        if not kernels:
            raise ResampleError('pitch ladder needs at least one kernel size')
        if any(int(n) != n or n < 1 for n in kernels):
            raise ResampleError('kernel sizes must be integers >= 1, got {}'.format(kernels))
        if len(set(kernels)) != len(kernels):
            raise ResampleError('kernel sizes must be unique, got {}'.format(kernels))

        self.kernels = [int(n) for n in kernels]
        self.native_pitch_um = float(native_pitch_um)

    @property
    def pitches_um(self) -> List[float]:
        return [scale_pitch(self.native_pitch_um, n) for n in self.kernels]

    def kernel_for(self, pitch_um: float) -> int:
        return self.kernels[self.pitches_um.index(pitch_um)]

    def __iter__(self):
        return iter(zip(self.kernels, self.pitches_um))

    def __len__(self) -> int:
        return len(self.kernels)

    def __repr__(self):
        return 'PitchLadder(kernels={!r}, native_pitch_um={!r})'.format(self.kernels, self.native_pitch_um)


def _require_complete(h: HeightMap, op: str) -> None:
    if not h.is_complete:
        raise ResampleError('{} needs a fully finite map, {!r} has missing pixels'.format(op, h))


def _check_kernel(shape, n: int) -> None:
    if n < 1:
        raise ResampleError('kernel size must be at least 1, not {}'.format(n))
    if n > shape[0] or n > shape[1]:
        raise ResampleError('kernel size {} exceeds grid dimensions {}x{}'.format(n, shape[1], shape[0]))


def crop_to_multiple(a: np.ndarray, n: int) -> np.ndarray:
    rows, cols = (a.shape[0] // n) * n, (a.shape[1] // n) * n
    return a[:rows, :cols]


def block_mean(a: np.ndarray, n: int) -> np.ndarray:
    a = crop_to_multiple(np.asarray(a, dtype=np.float64), n)
    rows, cols = a.shape[0] // n, a.shape[1] // n
    return a.reshape(rows, n, cols, n).mean(axis=(1, 3))


def block_downsample(h: HeightMap, n: int) -> HeightMap:
    """
    Average n x n blocks after cropping top-left to a multiple of n.

    The pitch grows by n; n == 1 returns an identical copy.
    """
    _require_complete(h, 'block_downsample')
    _check_kernel(h.shape, n)
    if n == 1:
        return h.replace(z=h.z)
    return h.replace(z=block_mean(h.z, n), pitch_um=scale_pitch(h.pitch_um, n))


def block_downsample_labels(labels: LabelMask, n: int) -> LabelMask:
    """Majority rule: a coarse pixel is ink when at least half its block is."""
    _check_kernel(labels.shape, n)
    if n == 1:
        return LabelMask(labels.ink)
    return LabelMask(block_mean(labels.ink, n) >= 0.5)


def _axis_weights(source: int, target: int):
    x = (np.arange(target, dtype=np.float64) + 0.5) * (source / target) - 0.5
    x = np.clip(x, 0.0, source - 1)
    i0 = np.minimum(np.floor(x).astype(np.intp), max(source - 2, 0))
    i1 = np.minimum(i0 + 1, source - 1)
    frac = x - i0
    return i0, i1, frac


def bilinear_upsample(h: HeightMap, target_w: int, target_h: int, target_pitch_um: float) -> HeightMap:
    """Pixel-center aligned bilinear interpolation with edge clamping."""
    if target_w < 1 or target_h < 1:
        raise ResampleError('target dimensions must be positive, got {}x{}'.format(target_w, target_h))
    if target_w < h.width or target_h < h.height:
        raise ResampleError('cannot upsample {}x{} to smaller grid {}x{}'.format(
            h.width, h.height, target_w, target_h))
    _require_complete(h, 'bilinear_upsample')

    r0, r1, fy = _axis_weights(h.height, target_h)
    c0, c1, fx = _axis_weights(h.width, target_w)

    rows = (1.0 - fy)[:, None] * h.z[r0, :] + fy[:, None] * h.z[r1, :]
    z = (1.0 - fx)[None, :] * rows[:, c0] + fx[None, :] * rows[:, c1]
    return h.replace(z=z, pitch_um=target_pitch_um)


def degrade_roundtrip(h: HeightMap, n: int) -> HeightMap:
    """Block average by n, then interpolate back onto the cropped native grid at the native pitch."""
    coarse = block_downsample(h, n)
    if n == 1:
        return coarse
    rows, cols = crop_to_multiple(h.z, n).shape
    return bilinear_upsample(coarse, cols, rows, h.pitch_um)


def zbin(h: HeightMap, delta_um: float) -> HeightMap:
    """Quantize heights to the centres of uniform bins of width delta anchored at 0."""
    if not delta_um > 0:
        raise ResampleError('bin width must be positive, not {}'.format(delta_um))
    _require_complete(h, 'zbin')
    return h.replace(z=(np.floor(h.z / delta_um) + 0.5) * delta_um)
