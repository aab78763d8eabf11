"""
Grouped Dice box plots written as plain SVG text.

Boxes span Q1 to Q3 with the median marked; whiskers reach the most extreme
values inside 1.5 x IQR of the quartiles and points beyond are not drawn.
Every coordinate is printed with two decimals so output is byte-stable.
"""
import logging
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from reliefscan.exceptions import StatisticsError
from reliefscan.models.enums import Regime
from reliefscan.models.results import ResultTable
from reliefscan.preprocess import percentile
from reliefscan.utils.format import format_float

LOG = logging.getLogger('reliefscan.report')

NS_SVG = 'http://www.w3.org/2000/svg'

WIDTH = 960
HEIGHT = 440
MARGIN = dict(left=70, right=20, top=40, bottom=70)
GROUP_FILL = 0.7  # share of a pitch slot covered by its boxes
COLORS = {
    Regime.Matched: '#4c72b0',
    Regime.CrossRes: '#dd8452',
    Regime.ZBin: '#55a868',
    Regime.Lopo: '#8172b3'
}
LABELS = {
    Regime.Matched: 'Matched resolution',
    Regime.CrossRes: 'Trained at native pitch',
    Regime.ZBin: 'Z-binned test inputs',
    Regime.Lopo: 'Leave one papyrus out'
}

TukeyBox = NamedTuple('TukeyBox', [
    ('q1', float),
    ('median', float),
    ('q3', float),
    ('whisker_lo', float),
    ('whisker_hi', float),
    ('n', int)
])


def tukey_box(values: Sequence[float]) -> TukeyBox:
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise StatisticsError('cannot draw a box for an empty group')
    q1, median, q3 = percentile(v, [25, 50, 75])
    iqr = q3 - q1
    inside = v[(v >= q1 - 1.5 * iqr) & (v <= q3 + 1.5 * iqr)]
    return TukeyBox(float(q1), float(median), float(q3), float(inside.min()), float(inside.max()), int(v.size))


def _num(x: float) -> str:
    return '{:.2f}'.format(x)


def props_repr(d: Dict[str, object]) -> str:
    return ' '.join('{}="{}"'.format(k.replace('_', '-'), _num(v) if isinstance(v, float) else v)
                    for k, v in d.items())


def element(tag: str, text: Optional[str] = None, **attr) -> str:
    if text is None:
        return '<{} {}/>'.format(tag, props_repr(attr))
    return '<{} {}>{}</{}>'.format(tag, props_repr(attr), text, tag)


class Axes:
    """Maps (slot, dice) to pixel coordinates."""

    def __init__(self, slots: int) -> None:
        self.slots = max(slots, 1)
        self.x0 = float(MARGIN['left'])
        self.x1 = float(WIDTH - MARGIN['right'])
        self.y0 = float(HEIGHT - MARGIN['bottom'])
        self.y1 = float(MARGIN['top'])

    @property
    def slot_width(self) -> float:
        return (self.x1 - self.x0) / self.slots

    def x(self, slot: float) -> float:
        return self.x0 + (slot + 0.5) * self.slot_width

    def y(self, dice: float) -> float:
        return self.y0 - min(max(dice, 0.0), 1.0) * (self.y0 - self.y1)


def draw_box(ax: Axes, cx: float, width: float, box: TukeyBox, color: str) -> List[str]:
    half = width / 2.0
    parts = [
        element('line', x1=cx, y1=ax.y(box.whisker_lo), x2=cx, y2=ax.y(box.q1), stroke='#333333'),
        element('line', x1=cx, y1=ax.y(box.q3), x2=cx, y2=ax.y(box.whisker_hi), stroke='#333333'),
        element('line', x1=cx - half / 2, y1=ax.y(box.whisker_lo), x2=cx + half / 2, y2=ax.y(box.whisker_lo),
                stroke='#333333'),
        element('line', x1=cx - half / 2, y1=ax.y(box.whisker_hi), x2=cx + half / 2, y2=ax.y(box.whisker_hi),
                stroke='#333333')
    ]
    if box.q3 > box.q1:
        parts.append(element('rect', x=cx - half, y=ax.y(box.q3), width=width, height=ax.y(box.q1) - ax.y(box.q3),
                             fill=color, fill_opacity='0.6', stroke=color))
    # a zero-height box collapses to its median line
    parts.append(element('line', x1=cx - half, y1=ax.y(box.median), x2=cx + half, y2=ax.y(box.median),
                         stroke='#000000', stroke_width='2'))
    return parts


def render_boxplot(table: ResultTable, regimes: Sequence[Regime] = (Regime.Matched, Regime.CrossRes),
                   reference: float = 0.70, title: str = 'Held-out Dice by pixel size') -> str:
    """One box per (regime, pitch), grouped by pitch, with a dashed reference line."""
    regimes = [Regime(r) for r in regimes if len(table.for_regime(r))]
    if not regimes:
        raise StatisticsError('no results for regimes to plot')
    pitches = sorted({p for r in regimes for p in table.for_regime(r).pitches})
    ax = Axes(len(pitches))
    box_width = ax.slot_width * GROUP_FILL / len(regimes)

    body = [element('rect', x=0, y=0, width=WIDTH, height=HEIGHT, fill='#ffffff')]
    body.append(element('text', title, x=float(WIDTH) / 2, y=24.0, text_anchor='middle', font_size='16'))

    for tick in np.linspace(0.0, 1.0, 6):
        y = ax.y(float(tick))
        body.append(element('line', x1=ax.x0, y1=y, x2=ax.x1, y2=y, stroke='#e5e5e5'))
        body.append(element('text', '{:.1f}'.format(tick), x=ax.x0 - 8, y=y + 4, text_anchor='end', font_size='12'))
    body.append(element('line', x1=ax.x0, y1=ax.y(reference), x2=ax.x1, y2=ax.y(reference),
                        stroke='#c44e52', stroke_dasharray='6,4'))

    boxes = 0
    for slot, pitch in enumerate(pitches):
        body.append(element('text', format_float(pitch), x=ax.x(slot), y=ax.y0 + 20, text_anchor='middle',
                            font_size='12'))
        for i, regime in enumerate(regimes):
            scores = table.for_regime(regime).dice_at(pitch)
            if not scores.size:
                continue
            cx = ax.x(slot) + (i - (len(regimes) - 1) / 2.0) * box_width
            body.extend(draw_box(ax, cx, box_width * 0.85, tukey_box(scores), COLORS[regime]))
            boxes += 1

    body.append(element('line', x1=ax.x0, y1=ax.y0, x2=ax.x1, y2=ax.y0, stroke='#000000'))
    body.append(element('line', x1=ax.x0, y1=ax.y0, x2=ax.x0, y2=ax.y1, stroke='#000000'))
    body.append(element('text', 'Pixel size (&#181;m)', x=(ax.x0 + ax.x1) / 2, y=float(HEIGHT) - 20,
                        text_anchor='middle', font_size='13'))
    body.append(element('text', 'Dice', x=18.0, y=(ax.y0 + ax.y1) / 2, text_anchor='middle', font_size='13',
                        transform='rotate(-90 18.00 {})'.format(_num((ax.y0 + ax.y1) / 2))))

    for i, regime in enumerate(regimes):
        x = ax.x1 - 200.0
        y = ax.y1 + 8 + 18 * i
        body.append(element('rect', x=x, y=y, width=12.0, height=12.0, fill=COLORS[regime], fill_opacity='0.6'))
        body.append(element('text', LABELS[regime], x=x + 18, y=y + 10, font_size='12'))

    LOG.debug('Drew %d boxes over %d pitches', boxes, len(pitches))
    head = '<svg {}>'.format(props_repr(dict(xmlns=NS_SVG, width=WIDTH, height=HEIGHT,
                                             viewBox='0 0 {} {}'.format(WIDTH, HEIGHT),
                                             font_family='sans-serif')))
    return '\n'.join([head] + ['  ' + line for line in body] + ['</svg>']) + '\n'
