from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from reliefscan.models.enums import REGIME_ORDER, Regime

COLUMNS = ['sample_id', 'papyrus_id', 'regime', 'pitch_um', 'dice', 'fold', 'model_id']

ResultRow = NamedTuple('ResultRow', [
    ('sample_id', str),
    ('papyrus_id', str),
    ('regime', Regime),
    ('pitch_um', float),
    ('dice', float),
    ('fold', int),
    ('model_id', str)
])


class ResultTable:
    """Long-form held-out scores; one row per (sample, regime, pitch)."""

    def __init__(self, rows: Optional[Iterable[ResultRow]] = None) -> None:
        self._rows = {}  # type: Dict[Tuple[str, Regime, float], ResultRow]
        for row in rows or []:
            self.add(row)

    def add(self, row: ResultRow) -> None:
        if not 0.0 <= row.dice <= 1.0:
            raise ValueError('dice must lie in [0, 1], got {} for {}'.format(row.dice, row.sample_id))
        key = (row.sample_id, Regime(row.regime), row.pitch_um)
        if key in self._rows:
            raise ValueError('duplicate result for sample {} regime {} pitch {}'.format(*key))
        self._rows[key] = row._replace(regime=Regime(row.regime))

    def extend(self, rows: Iterable[ResultRow]) -> None:
        for row in rows:
            self.add(row)

    @property
    def rows(self) -> List[ResultRow]:
        order = {r: i for i, r in enumerate(REGIME_ORDER)}
        return sorted(self._rows.values(), key=lambda r: (order[r.regime], r.pitch_um, r.sample_id))

    def __iter__(self) -> Iterator[ResultRow]:
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self._rows)

    def for_regime(self, regime: Regime) -> 'ResultTable':
        return ResultTable(r for r in self._rows.values() if r.regime == Regime(regime))

    @property
    def regimes(self) -> List[Regime]:
        present = {r.regime for r in self._rows.values()}
        return [r for r in REGIME_ORDER if r in present]

    @property
    def pitches(self) -> List[float]:
        return sorted({r.pitch_um for r in self._rows.values()})

    @property
    def sample_ids(self) -> List[str]:
        return sorted({r.sample_id for r in self._rows.values()})

    def dice_at(self, pitch_um: float) -> np.ndarray:
        return np.array([r.dice for r in self.rows if r.pitch_um == pitch_um], dtype=np.float64)

    def pivot(self, regime: Regime) -> Tuple[List[str], List[float], np.ndarray]:
        """Subjects x pitches grid of Dice for one regime; missing cells are NaN."""
        table = self.for_regime(regime)
        samples = table.sample_ids
        pitches = table.pitches
        grid = np.full((len(samples), len(pitches)), np.nan)
        si = {s: i for i, s in enumerate(samples)}
        pj = {p: j for j, p in enumerate(pitches)}
        for r in table.rows:
            grid[si[r.sample_id], pj[r.pitch_um]] = r.dice
        return samples, pitches, grid

    def __repr__(self):
        return 'ResultTable(rows={!r}, regimes={!r})'.format(len(self), [r.value for r in self.regimes])
