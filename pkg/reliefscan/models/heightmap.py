from typing import Dict, Optional

import numpy as np

from reliefscan.exceptions import DimensionMismatch


class HeightMap:
    """
    Dense grid of surface heights in micrometres with a square lateral pitch.

    Missing measurements are held as NaN; +/-inf is folded into NaN on
    construction so that every entry is either finite or missing.
    """

    def __init__(self, z: np.ndarray, pitch_um: float, meta: Optional[Dict[str, str]] = None) -> None:

        z = np.array(z, dtype=np.float64)
        if z.ndim != 2:
            raise ValueError('heights must be a 2D grid, got {} dimensions'.format(z.ndim))
        if z.shape[0] < 1 or z.shape[1] < 1:
            raise ValueError('heights must have at least one row and one column')
        try:
            pitch_um = float(pitch_um)
        except (TypeError, ValueError):
            raise ValueError("Could not convert 'pitch_um' value of '{}' to a number".format(pitch_um))
        if not pitch_um > 0:
            raise ValueError("Invalid non-positive 'pitch_um' value ({})".format(pitch_um))

        z[np.isinf(z)] = np.nan
        z.setflags(write=False)

        self.z = z
        self.pitch_um = pitch_um
        self.meta = dict(meta or {})

    @property
    def width(self) -> int:
        return self.z.shape[1]

    @property
    def height(self) -> int:
        return self.z.shape[0]

    @property
    def shape(self):
        return self.z.shape

    @property
    def is_complete(self) -> bool:
        return bool(np.isfinite(self.z).all())

    def replace(self, z: np.ndarray = None, pitch_um: float = None) -> 'HeightMap':
        return HeightMap(
            z=self.z if z is None else z,
            pitch_um=self.pitch_um if pitch_um is None else pitch_um,
            meta=self.meta
        )

    def same_values(self, other: 'HeightMap') -> bool:
        """Bit-exact comparison of finite values and identical missing pattern."""
        if self.shape != other.shape:
            return False
        a, b = self.z, other.z
        missing = np.isnan(a)
        if not np.array_equal(missing, np.isnan(b)):
            return False
        return a[~missing].tobytes() == b[~missing].tobytes()

    @property
    def serialize(self):
        return {
            'width': self.width,
            'height': self.height,
            'pitchUm': self.pitch_um,
            'missing': int(np.isnan(self.z).sum()),
            'meta': self.meta
        }

    def __repr__(self):
        return 'HeightMap(width={!r}, height={!r}, pitch_um={!r}, missing={!r})'.format(
            self.width, self.height, self.pitch_um, int(np.isnan(self.z).sum())
        )


class ValidityMask:
    """True where the height measurement succeeded."""

    def __init__(self, m: np.ndarray) -> None:
        m = np.array(m, dtype=bool)
        if m.ndim != 2:
            raise ValueError('validity mask must be a 2D grid')
        self.m = m

    @classmethod
    def from_heightmap(cls, h: HeightMap) -> 'ValidityMask':
        return ValidityMask(np.isfinite(h.z))

    @property
    def width(self) -> int:
        return self.m.shape[1]

    @property
    def height(self) -> int:
        return self.m.shape[0]

    @property
    def missing(self) -> np.ndarray:
        return ~self.m

    @property
    def fraction_false(self) -> float:
        return float(np.count_nonzero(~self.m)) / self.m.size

    def __repr__(self):
        return 'ValidityMask(width={!r}, height={!r}, missing={!r})'.format(
            self.width, self.height, int(np.count_nonzero(~self.m))
        )


class LabelMask:
    """Binary per-pixel ink annotation; True is ink."""

    def __init__(self, ink: np.ndarray) -> None:
        ink = np.array(ink, dtype=bool)
        if ink.ndim != 2:
            raise ValueError('label mask must be a 2D grid')
        self.ink = ink

    @property
    def width(self) -> int:
        return self.ink.shape[1]

    @property
    def height(self) -> int:
        return self.ink.shape[0]

    @property
    def shape(self):
        return self.ink.shape

    @property
    def ink_pixels(self) -> int:
        return int(np.count_nonzero(self.ink))

    def crop(self, height: int, width: int) -> 'LabelMask':
        return LabelMask(self.ink[:height, :width])

    def __eq__(self, other):
        return isinstance(other, LabelMask) and np.array_equal(self.ink, other.ink)

    def __repr__(self):
        return 'LabelMask(width={!r}, height={!r}, ink={!r})'.format(self.width, self.height, self.ink_pixels)


def check_same_shape(a, b, what: str = 'grids') -> None:
    sa = getattr(a, 'shape', None)
    sb = getattr(b, 'shape', None)
    if sa != sb:
        raise DimensionMismatch('{} have different dimensions: {} vs {}'.format(what, sa, sb))
