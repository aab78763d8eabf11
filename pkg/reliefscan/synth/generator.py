import logging
from typing import Any, Dict, NamedTuple

import numpy as np
from scipy import ndimage

from reliefscan.exceptions import SynthError
from reliefscan.models.heightmap import HeightMap, LabelMask
from reliefscan.preprocess import round_half_away
from reliefscan.synth.glyphs import check_inside, get_glyph
from reliefscan.utils.rng import make_rng

LOG = logging.getLogger('reliefscan.synth')

MIN_SIZE = 8
ROUGHNESS_SIGMA_PX = 1.5  # correlation length of about 3 px

PHYSICAL = [
    'fiber_period_um', 'fiber_amp_um', 'tilt_um_per_mm', 'curvature_um_per_mm2',
    'roughness_rms_um', 'ink_depression_um', 'ink_smoothing_factor', 'stroke_width_um'
]


class SynthConfig:

    def __init__(self, seed: int = 0, **kwargs) -> None:
        self.seed = int(seed)
        self.width = int(kwargs.get('width', 1024))
        self.height = int(kwargs.get('height', 1024))
        self.pitch_um = float(kwargs.get('pitch_um', 0.34))
        self.fiber_period_um = float(kwargs.get('fiber_period_um', 20.0))
        self.fiber_amp_um = float(kwargs.get('fiber_amp_um', 1.0))
        self.tilt_um_per_mm = float(kwargs.get('tilt_um_per_mm', 20.0))
        self.curvature_um_per_mm2 = float(kwargs.get('curvature_um_per_mm2', 40.0))
        self.roughness_rms_um = float(kwargs.get('roughness_rms_um', 0.5))
        self.ink_depression_um = float(kwargs.get('ink_depression_um', 3.0))
        self.ink_smoothing_factor = float(kwargs.get('ink_smoothing_factor', 0.25))
        self.stroke_width_um = float(kwargs.get('stroke_width_um', 24.0))
        self.dropout_frac = float(kwargs.get('dropout_frac', 0.017))
        self.glyph = kwargs.get('glyph', 'alpha')

    def validate(self) -> None:
        if self.width < MIN_SIZE or self.height < MIN_SIZE:
            raise SynthError('canvas must be at least {0}x{0} pixels, got {1}x{2}'.format(
                MIN_SIZE, self.width, self.height))
        if not self.pitch_um > 0:
            raise SynthError('pitch_um must be positive, got {}'.format(self.pitch_um))
        negative = [name for name in PHYSICAL if getattr(self, name) < 0]
        if negative:
            raise SynthError('physical parameters must be >= 0: {}'.format(', '.join(negative)))
        if self.ink_smoothing_factor > 1:
            raise SynthError('ink_smoothing_factor must not exceed 1, got {}'.format(self.ink_smoothing_factor))
        if not 0 <= self.dropout_frac < 0.5:
            raise SynthError('dropout_frac must lie in [0, 0.5), got {}'.format(self.dropout_frac))
        check_inside(get_glyph(self.glyph))

    def replace(self, **changes) -> 'SynthConfig':
        values = self.serialize
        values.update(changes)
        return SynthConfig(**values)

    def with_offsets(self, offsets: Dict[str, float]) -> 'SynthConfig':
        """Shift physical parameters by per-papyrus offsets."""
        unknown = [k for k in offsets if k not in PHYSICAL]
        if unknown:
            raise SynthError('unknown papyrus offset parameters: {}'.format(', '.join(unknown)))
        return self.replace(**{k: getattr(self, k) + v for k, v in offsets.items()})

    @property
    def serialize(self) -> Dict[str, Any]:
        return {
            'seed': self.seed,
            'width': self.width,
            'height': self.height,
            'pitch_um': self.pitch_um,
            'fiber_period_um': self.fiber_period_um,
            'fiber_amp_um': self.fiber_amp_um,
            'tilt_um_per_mm': self.tilt_um_per_mm,
            'curvature_um_per_mm2': self.curvature_um_per_mm2,
            'roughness_rms_um': self.roughness_rms_um,
            'ink_depression_um': self.ink_depression_um,
            'ink_smoothing_factor': self.ink_smoothing_factor,
            'stroke_width_um': self.stroke_width_um,
            'dropout_frac': self.dropout_frac,
            'glyph': self.glyph
        }

    def __repr__(self):
        return 'SynthConfig(seed={!r}, size={}x{}, pitch_um={!r}, glyph={!r})'.format(
            self.seed, self.width, self.height, self.pitch_um,
            self.glyph if isinstance(self.glyph, str) else 'custom')


SynthSample = NamedTuple('SynthSample', [
    ('heightmap', HeightMap),
    ('labels', LabelMask)
])


def skeleton_distance(glyph, width: int, height: int) -> np.ndarray:
    """Distance in pixels from every pixel centre to the nearest skeleton segment."""
    rows, cols = np.mgrid[0:height, 0:width].astype(np.float64)
    dist = np.full((height, width), np.inf)
    for line in glyph:
        points = [(x * (width - 1), y * (height - 1)) for x, y in line]
        if len(points) == 1:
            points = points * 2
        for (ax, ay), (bx, by) in zip(points[:-1], points[1:]):
            dx, dy = bx - ax, by - ay
            length2 = dx * dx + dy * dy
            if length2 > 0:
                t = np.clip(((cols - ax) * dx + (rows - ay) * dy) / length2, 0.0, 1.0)
            else:
                t = np.zeros_like(cols)
            d = np.hypot(cols - ax - t * dx, rows - ay - t * dy)
            np.minimum(dist, d, out=dist)
    return dist


def ink_weight(dist: np.ndarray, half_width: float, feather: float) -> np.ndarray:
    """1 on the stroke, cosine taper to 0 over one stroke width outside it."""
    w = np.zeros_like(dist)
    w[dist <= half_width] = 1.0
    edge = (dist > half_width) & (dist < half_width + feather)
    w[edge] = 0.5 * (1.0 + np.cos(np.pi * (dist[edge] - half_width) / feather))
    return w


def generate_sample(cfg: SynthConfig) -> SynthSample:
    """
    Build a papyrus-like surface with one inked glyph.

    Heights combine a tilt plane, a quadratic bow, two orthogonal half-sine
    fibre lattices and band-limited roughness. Inside the glyph the roughness
    is attenuated and the surface lowered, both feathered over one stroke
    width. A fraction of pixels is then dropped at random, independently of
    the ink.
    """
    cfg.validate()
    rng = make_rng(cfg.seed)
    h, w = cfg.height, cfg.width

    rows, cols = np.mgrid[0:h, 0:w].astype(np.float64)
    x_mm = (cols - (w - 1) / 2.0) * cfg.pitch_um / 1000.0
    y_mm = (rows - (h - 1) / 2.0) * cfg.pitch_um / 1000.0

    angle = rng.uniform(0.0, 2.0 * np.pi)
    phase_x, phase_y = rng.uniform(0.0, 1.0, size=2)
    white = rng.standard_normal((h, w))

    z = cfg.tilt_um_per_mm * (np.cos(angle) * x_mm + np.sin(angle) * y_mm)
    z = z + cfg.curvature_um_per_mm2 * (x_mm ** 2 + y_mm ** 2)

    if cfg.fiber_amp_um > 0 and cfg.fiber_period_um > 0:
        period_px = cfg.fiber_period_um / cfg.pitch_um
        z = z + cfg.fiber_amp_um * np.abs(np.sin(np.pi * (cols / period_px + phase_x)))
        z = z + cfg.fiber_amp_um * np.abs(np.sin(np.pi * (rows / period_px + phase_y)))

    roughness = ndimage.gaussian_filter(white, ROUGHNESS_SIGMA_PX, mode='wrap')
    sd = roughness.std()
    roughness = roughness / sd if sd > 0 else roughness

    stroke_px = cfg.stroke_width_um / cfg.pitch_um
    dist = skeleton_distance(get_glyph(cfg.glyph), w, h)
    weight = ink_weight(dist, stroke_px / 2.0, stroke_px)
    labels = LabelMask(dist <= stroke_px / 2.0)

    attenuation = 1.0 - (1.0 - cfg.ink_smoothing_factor) * weight
    z = z + cfg.roughness_rms_um * roughness * attenuation
    z = z - cfg.ink_depression_um * weight

    count = int(round_half_away(cfg.dropout_frac * z.size))
    if count:
        dropped = rng.choice(z.size, size=count, replace=False)
        z.ravel()[dropped] = np.nan

    meta = {'source': 'synth', 'seed': str(cfg.seed)}
    if isinstance(cfg.glyph, str):
        meta['letter'] = cfg.glyph
    heightmap = HeightMap(z, cfg.pitch_um, meta=meta)
    LOG.debug('Generated %r with %d ink pixels from %r', heightmap, labels.ink_pixels, cfg)
    return SynthSample(heightmap, labels)
