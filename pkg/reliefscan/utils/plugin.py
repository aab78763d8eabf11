import logging
from collections import OrderedDict
from importlib.metadata import entry_points
from typing import TYPE_CHECKING, Dict, Type

from reliefscan.exceptions import SegmenterError

LOG = logging.getLogger('reliefscan.plugins')

if TYPE_CHECKING:
    from reliefscan.segment import SegmenterBase  # noqa

ENTRY_POINT_GROUP = 'reliefscan.segmenters'


def builtin_segmenters() -> 'Dict[str, Type[SegmenterBase]]':
    from reliefscan.segment.logistic import LogisticSegmenter
    from reliefscan.segment.roughness import RoughnessSegmenter
    return OrderedDict([
        ('logistic', LogisticSegmenter),
        ('roughness', RoughnessSegmenter)
    ])


class Segmenters:

    def __init__(self) -> None:
        self.available = OrderedDict()  # type: OrderedDict[str, Type[SegmenterBase]]

    def register(self, config=None) -> None:
        self.available = builtin_segmenters()
        for ep in entry_points(group=ENTRY_POINT_GROUP):
            if ep.name in self.available:
                continue
            try:
                self.available[ep.name] = ep.load()
                LOG.debug("Segmenter plugin '{}' found.".format(ep.name))
            except Exception as e:
                LOG.error("Failed to load segmenter plugin '{}': {}".format(ep.name, str(e)))
        LOG.debug('Segmenters available: {}'.format(', '.join(self.available.keys())))

    def get(self, name: str) -> 'SegmenterBase':
        if not self.available:
            self.register()
        try:
            return self.available[name](name=name)
        except KeyError:
            raise SegmenterError("Unknown segmenter '{}', choose from {}".format(name, ', '.join(self.available)))
