import logging
from typing import NamedTuple, Tuple

import numpy as np
from scipy import ndimage

from reliefscan.models.heightmap import LabelMask
from reliefscan.models.image import NormalizedImage
from reliefscan.utils.rng import make_rng

LOG = logging.getLogger('reliefscan.segment')

INTENSITY_RANGE = (0.9, 1.1)
ELASTIC_GRID = 4  # control points per axis
ELASTIC_SIGMA_PX = 0.25
ELASTIC_MAX_PX = 0.45  # under half a pixel: nearest-neighbour labels keep every pixel

Augmentation = NamedTuple('Augmentation', [
    ('flip_rows', bool),
    ('flip_cols', bool),
    ('rot90', int),
    ('intensity', float),
    ('displacement', np.ndarray)  # (2, grid, grid) row/col offsets in pixels
])

IDENTITY = Augmentation(False, False, 0, 1.0, np.zeros((2, ELASTIC_GRID, ELASTIC_GRID)))


def is_identity(params: Augmentation) -> bool:
    return (not params.flip_rows and not params.flip_cols and params.rot90 % 4 == 0
            and params.intensity == 1.0 and not np.any(params.displacement))


def draw_augmentation(seed: int) -> Augmentation:
    rng = make_rng(seed)
    flip_rows, flip_cols = (bool(f) for f in rng.random(2) < 0.5)
    return Augmentation(
        flip_rows=flip_rows,
        flip_cols=flip_cols,
        rot90=int(rng.integers(0, 4)),
        intensity=float(rng.uniform(*INTENSITY_RANGE)),
        displacement=np.clip(rng.normal(0.0, ELASTIC_SIGMA_PX, size=(2, ELASTIC_GRID, ELASTIC_GRID)),
                             -ELASTIC_MAX_PX, ELASTIC_MAX_PX)
    )


def _dense_displacement(coarse: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    grid = coarse.shape[-1]
    rows = np.linspace(0, grid - 1, shape[0])
    cols = np.linspace(0, grid - 1, shape[1])
    rr, cc = np.meshgrid(rows, cols, indexing='ij')
    return np.stack([ndimage.map_coordinates(c, [rr, cc], order=1, mode='nearest') for c in coarse])


def apply_augmentation(img: NormalizedImage, labels: LabelMask,
                       params: Augmentation) -> Tuple[NormalizedImage, LabelMask]:
    """
    Same geometric transform on image (bilinear) and labels (nearest).

    Elastic offsets are clipped to ELASTIC_MAX_PX, so the warp moves image
    values by a fraction of a pixel and leaves the ink area unchanged.
    """
    if is_identity(params):
        return img, labels

    u = img.unit
    ink = labels.ink
    if params.intensity != 1.0:
        u = np.clip(u * params.intensity, 0.0, 1.0)
    if params.flip_rows:
        u, ink = u[::-1, :], ink[::-1, :]
    if params.flip_cols:
        u, ink = u[:, ::-1], ink[:, ::-1]
    if params.rot90 % 4:
        u, ink = np.rot90(u, params.rot90), np.rot90(ink, params.rot90)

    if np.any(params.displacement):
        coarse = np.clip(params.displacement, -ELASTIC_MAX_PX, ELASTIC_MAX_PX)
        dy, dx = _dense_displacement(coarse, u.shape)
        rr, cc = np.mgrid[0:u.shape[0], 0:u.shape[1]].astype(np.float64)
        coords = [rr + dy, cc + dx]
        u = ndimage.map_coordinates(u, coords, order=1, mode='nearest')
        ink = ndimage.map_coordinates(ink.astype(np.uint8), coords, order=0, mode='nearest').astype(bool)

    u16 = np.floor(np.clip(u, 0.0, 1.0) * 65535 + 0.5).astype(np.uint16)
    return img.replace(np.ascontiguousarray(u16)), LabelMask(np.ascontiguousarray(ink))


def augment(img: NormalizedImage, labels: LabelMask, seed: int) -> Tuple[NormalizedImage, LabelMask]:
    """Random flips, quarter turns, intensity scaling and a sub-pixel elastic warp, deterministic per seed."""
    return apply_augmentation(img, labels, draw_augmentation(seed))
