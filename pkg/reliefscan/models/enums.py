from enum import Enum


class Regime(str, Enum):

    Matched = 'matched'
    CrossRes = 'cross_res'
    ZBin = 'zbin'
    Lopo = 'lopo'


class FoldKind(str, Enum):

    CV5 = 'cv5'
    LOPO = 'lopo'


REGIME_ORDER = [Regime.Matched, Regime.CrossRes, Regime.ZBin, Regime.Lopo]
