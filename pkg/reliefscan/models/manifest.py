from collections import OrderedDict
from typing import Dict, Iterator, List, Optional


class Sample:

    def __init__(self, sample_id: str, papyrus_id: str, letter: str, heightmap_path: str, label_path: str) -> None:
        if not sample_id:
            raise ValueError('sample_id must not be empty')
        if not papyrus_id:
            raise ValueError('papyrus_id must not be empty')

        self.sample_id = sample_id
        self.papyrus_id = papyrus_id
        self.letter = letter
        self.heightmap_path = heightmap_path
        self.label_path = label_path

    @property
    def serialize(self) -> Dict[str, str]:
        return {
            'sample_id': self.sample_id,
            'papyrus_id': self.papyrus_id,
            'letter': self.letter,
            'heightmap': self.heightmap_path,
            'label': self.label_path
        }

    def __repr__(self):
        return 'Sample(sample_id={!r}, papyrus_id={!r}, letter={!r})'.format(
            self.sample_id, self.papyrus_id, self.letter
        )


class DatasetManifest:

    FORMAT_VERSION = 1

    def __init__(self, entries: List[Sample], format_version: int = FORMAT_VERSION, root: Optional[str] = None) -> None:
        self.entries = list(entries)
        self.format_version = format_version
        self.root = root

    def __iter__(self) -> Iterator[Sample]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def sample_ids(self) -> List[str]:
        return [s.sample_id for s in self.entries]

    @property
    def papyri(self) -> List[str]:
        """Papyrus ids in order of first appearance."""
        return list(OrderedDict.fromkeys(s.papyrus_id for s in self.entries))

    def get(self, sample_id: str) -> Sample:
        for s in self.entries:
            if s.sample_id == sample_id:
                return s
        raise KeyError(sample_id)

    def by_papyrus(self) -> 'OrderedDict[str, List[Sample]]':
        groups = OrderedDict()  # type: OrderedDict[str, List[Sample]]
        for s in self.entries:
            groups.setdefault(s.papyrus_id, []).append(s)
        return groups

    def __repr__(self):
        return 'DatasetManifest(samples={!r}, papyri={!r})'.format(len(self.entries), self.papyri)
