import numpy as np


class NormalizedImage:
    """
    Per-sample min-max normalized heights quantized to 16 bits.

    z_min_um and z_max_um are the endpoints of the affine map; a degenerate
    image (flat input) has z_min_um == z_max_um and is all zeros.
    """

    def __init__(self, u16: np.ndarray, pitch_um: float, z_min_um: float, z_max_um: float, degenerate: bool = False) -> None:

        u16 = np.asarray(u16)
        if u16.ndim != 2:
            raise ValueError('normalized image must be a 2D grid')
        if u16.dtype != np.uint16:
            raise ValueError('normalized image must hold uint16 values, got {}'.format(u16.dtype))
        if not pitch_um > 0:
            raise ValueError("Invalid non-positive 'pitch_um' value ({})".format(pitch_um))
        if degenerate:
            if z_min_um != z_max_um:
                raise ValueError('degenerate image must have z_min_um == z_max_um')
        elif not z_min_um < z_max_um:
            raise ValueError('z_min_um ({}) must be below z_max_um ({})'.format(z_min_um, z_max_um))

        self.u16 = u16
        self.pitch_um = float(pitch_um)
        self.z_min_um = float(z_min_um)
        self.z_max_um = float(z_max_um)
        self.degenerate = degenerate

    @property
    def width(self) -> int:
        return self.u16.shape[1]

    @property
    def height(self) -> int:
        return self.u16.shape[0]

    @property
    def shape(self):
        return self.u16.shape

    @property
    def unit(self) -> np.ndarray:
        """Values rescaled to [0, 1] as 64-bit floats."""
        return self.u16.astype(np.float64) / 65535.0

    def replace(self, u16: np.ndarray) -> 'NormalizedImage':
        return NormalizedImage(u16, self.pitch_um, self.z_min_um, self.z_max_um, self.degenerate)

    def __repr__(self):
        return 'NormalizedImage(width={!r}, height={!r}, pitch_um={!r}, z_range=[{!r}, {!r}])'.format(
            self.width, self.height, self.pitch_um, self.z_min_um, self.z_max_um
        )
