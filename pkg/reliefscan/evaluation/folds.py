import logging
from collections import OrderedDict
from typing import Dict, List

from reliefscan.exceptions import FoldError
from reliefscan.models.enums import FoldKind
from reliefscan.models.manifest import DatasetManifest
from reliefscan.utils.rng import make_rng

LOG = logging.getLogger('reliefscan.experiment')


class FoldPlan:

    def __init__(self, kind: FoldKind, assignments: Dict[str, int], seed: int, names: List[str] = None) -> None:
        self.kind = FoldKind(kind)
        self.assignments = OrderedDict(assignments)
        self.seed = seed
        self.names = names or [str(k) for k in range(self.n_folds)]

    @property
    def n_folds(self) -> int:
        return len(set(self.assignments.values()))

    @property
    def folds(self) -> List[int]:
        return sorted(set(self.assignments.values()))

    def test_ids(self, fold: int) -> List[str]:
        return [s for s, k in self.assignments.items() if k == fold]

    def train_ids(self, fold: int) -> List[str]:
        return [s for s, k in self.assignments.items() if k != fold]

    def fold_of(self, sample_id: str) -> int:
        return self.assignments[sample_id]

    @property
    def sizes(self) -> List[int]:
        return [len(self.test_ids(k)) for k in self.folds]

    @property
    def serialize(self):
        return {
            'kind': self.kind.value,
            'seed': self.seed,
            'names': self.names,
            'assignments': dict(self.assignments)
        }

    def __repr__(self):
        return 'FoldPlan(kind={!r}, folds={!r}, sizes={!r})'.format(self.kind.value, self.n_folds, self.sizes)


def make_folds(manifest: DatasetManifest, kind: FoldKind, seed: int = 0, n_folds: int = 5) -> FoldPlan:
    """
    cv5 shuffles the sorted sample ids with the seeded generator and deals
    them round-robin; lopo makes one fold per papyrus.
    """
    kind = FoldKind(kind)
    if kind == FoldKind.LOPO:
        groups = manifest.by_papyrus()
        if len(groups) < 2:
            raise FoldError('leave-one-papyrus-out needs at least 2 papyri, manifest has {}'.format(len(groups)))
        assignments = OrderedDict()  # type: OrderedDict[str, int]
        for k, members in enumerate(groups.values()):
            for s in members:
                assignments[s.sample_id] = k
        return FoldPlan(kind, assignments, seed, names=list(groups))

    ids = sorted(manifest.sample_ids)
    if len(ids) < n_folds:
        raise FoldError('{} samples cannot fill {} folds'.format(len(ids), n_folds))
    order = make_rng(seed).permutation(len(ids))
    assignments = OrderedDict((ids[j], i % n_folds) for i, j in enumerate(order))
    plan = FoldPlan(kind, assignments, seed)
    LOG.debug('Planned %r', plan)
    return plan
