"""
Stroke skeletons for a handful of Greek-like letters.

Each glyph is a list of polylines; points are (x, y) in canvas-normalized
coordinates with the origin at the top-left and y growing downwards.
"""
import math
from typing import Dict, List, Sequence, Tuple

from reliefscan.exceptions import SynthError

Point = Tuple[float, float]
Polyline = List[Point]
Glyph = List[Polyline]


def _ring(cx: float, cy: float, rx: float, ry: float, segments: int = 16) -> Polyline:
    return [
        (cx + rx * math.cos(2 * math.pi * i / segments), cy + ry * math.sin(2 * math.pi * i / segments))
        for i in range(segments + 1)
    ]


GLYPHS = {
    'alpha': [
        [(0.2, 0.85), (0.5, 0.15), (0.8, 0.85)],
        [(0.33, 0.55), (0.67, 0.55)]
    ],
    'epsilon': [
        [(0.75, 0.2), (0.3, 0.2), (0.3, 0.8), (0.75, 0.8)],
        [(0.3, 0.5), (0.65, 0.5)]
    ],
    'lambda': [
        [(0.2, 0.85), (0.5, 0.15), (0.8, 0.85)]
    ],
    'omicron': [
        _ring(0.5, 0.5, 0.28, 0.32)
    ],
    'pi': [
        [(0.2, 0.2), (0.8, 0.2)],
        [(0.32, 0.2), (0.32, 0.85)],
        [(0.68, 0.2), (0.68, 0.85)]
    ],
    'tau': [
        [(0.2, 0.2), (0.8, 0.2)],
        [(0.5, 0.2), (0.5, 0.85)]
    ],
    'stroke': [
        [(0.5, 0.15), (0.5, 0.85)]
    ],
}  # type: Dict[str, Glyph]

LETTERS = ['alpha', 'epsilon', 'lambda', 'omicron', 'pi', 'tau']


def get_glyph(glyph) -> Glyph:
    """Resolve a glyph name or validate an explicit list of polylines."""
    if isinstance(glyph, str):
        try:
            return GLYPHS[glyph]
        except KeyError:
            raise SynthError('unknown glyph {!r}, choose from {}'.format(glyph, ', '.join(sorted(GLYPHS))))

    polylines = [[(float(x), float(y)) for x, y in line] for line in glyph]
    if not polylines or any(len(line) < 1 for line in polylines):
        raise SynthError('glyph needs at least one polyline with at least one point')
    return polylines


def check_inside(glyph: Sequence[Polyline]) -> None:
    for line in glyph:
        for x, y in line:
            if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
                raise SynthError('stroke skeleton point ({}, {}) lies outside the canvas'.format(x, y))
