from reliefscan.models.enums import FoldKind, Regime  # noqa
from reliefscan.models.heightmap import HeightMap, LabelMask, ValidityMask  # noqa
from reliefscan.models.image import NormalizedImage  # noqa
from reliefscan.models.manifest import DatasetManifest, Sample  # noqa
from reliefscan.models.results import ResultRow, ResultTable  # noqa
from reliefscan.models.segmenter import (FeatureStack, PredictionMask,  # noqa
                                         SegmenterModel)
from reliefscan.models.stats import PairedMatrix, TestReport  # noqa
