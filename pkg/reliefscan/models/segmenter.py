from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from reliefscan.exceptions import FeatureMismatch, FormatError

JSON = Dict[str, Any]


def feature_names(scales_px: Sequence[int]) -> List[str]:
    names = ['height']
    for kind in ('smooth', 'gradient', 'roughness', 'laplacian'):
        names.extend('{}_s{}'.format(kind, s) for s in scales_px)
    return names


class FeatureStack:
    """Per-pixel multiscale topographic features, shape (features, rows, cols)."""

    def __init__(self, features: np.ndarray, scales_px: Sequence[int]) -> None:
        features = np.asarray(features, dtype=np.float64)
        if features.ndim != 3:
            raise ValueError('feature stack must be 3D (features, rows, cols)')
        if features.shape[0] != 1 + 4 * len(scales_px):
            raise FeatureMismatch('feature stack has {} planes, expected {} for scales {}'.format(
                features.shape[0], 1 + 4 * len(scales_px), list(scales_px)))
        self.features = features
        self.scales_px = [int(s) for s in scales_px]

    @property
    def count(self) -> int:
        return self.features.shape[0]

    @property
    def names(self) -> List[str]:
        return feature_names(self.scales_px)

    @property
    def shape(self):
        return self.features.shape[1:]

    def pixels(self, index: Optional[np.ndarray] = None) -> np.ndarray:
        """(pixels, features) design matrix, optionally restricted to flat pixel indices."""
        flat = self.features.reshape(self.count, -1)
        if index is not None:
            flat = flat[:, index]
        return flat.T

    def plane(self, name: str) -> np.ndarray:
        return self.features[self.names.index(name)]

    def __repr__(self):
        return 'FeatureStack(count={!r}, shape={!r}, scales_px={!r})'.format(self.count, self.shape, self.scales_px)


class SegmenterModel:

    FORMAT_VERSION = 1

    def __init__(self, weights: np.ndarray, bias: float, scales_px: Sequence[int], mean: np.ndarray, std: np.ndarray,
                 train_pitch_um: float, **kwargs) -> None:

        weights = np.asarray(weights, dtype=np.float64)
        mean = np.asarray(mean, dtype=np.float64)
        std = np.asarray(std, dtype=np.float64)
        expected = 1 + 4 * len(scales_px)
        if weights.shape != (expected,):
            raise FeatureMismatch('model has {} weights, feature config expects {}'.format(weights.shape, expected))
        if mean.shape != weights.shape or std.shape != weights.shape:
            raise FeatureMismatch('standardization parameters do not match the weight count')
        if not train_pitch_um > 0:
            raise ValueError("Invalid non-positive 'train_pitch_um' value ({})".format(train_pitch_um))

        self.weights = weights
        self.bias = float(bias)
        self.scales_px = [int(s) for s in scales_px]
        self.mean = mean
        self.std = std
        self.train_pitch_um = float(train_pitch_um)

        self.segmenter = kwargs.get('segmenter', None) or 'logistic'
        self.model_id = kwargs.get('model_id', None) or ''
        self.seed = kwargs.get('seed', None)
        self.epochs = kwargs.get('epochs', 0)
        self.learning_rate = kwargs.get('learning_rate', None)
        self.loss_curve = list(kwargs.get('loss_curve', None) or [])
        self.val_curve = list(kwargs.get('val_curve', None) or [])

    @property
    def feature_count(self) -> int:
        return self.weights.shape[0]

    def standardize(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.feature_count:
            raise FeatureMismatch('got {} features, model expects {}'.format(x.shape[-1], self.feature_count))
        return (x - self.mean) / self.std

    def logits(self, x: np.ndarray) -> np.ndarray:
        return self.standardize(x) @ self.weights + self.bias

    @classmethod
    def zeros(cls, scales_px: Sequence[int], train_pitch_um: float) -> 'SegmenterModel':
        count = 1 + 4 * len(scales_px)
        return SegmenterModel(np.zeros(count), 0.0, scales_px, np.zeros(count), np.ones(count), train_pitch_um)

    @property
    def serialize(self) -> JSON:
        return {
            'format_version': self.FORMAT_VERSION,
            'segmenter': self.segmenter,
            'model_id': self.model_id,
            'scales_px': self.scales_px,
            'features': feature_names(self.scales_px),
            'weights': [float(w) for w in self.weights],
            'bias': self.bias,
            'mean': [float(m) for m in self.mean],
            'std': [float(s) for s in self.std],
            'train_pitch_um': self.train_pitch_um,
            'seed': self.seed,
            'epochs': self.epochs,
            'learning_rate': self.learning_rate,
            'loss_curve': [float(v) for v in self.loss_curve],
            'val_curve': [float(v) for v in self.val_curve]
        }

    @classmethod
    def parse(cls, json: JSON) -> 'SegmenterModel':
        if json.get('format_version') != cls.FORMAT_VERSION:
            raise FormatError('unsupported model format_version {!r}'.format(json.get('format_version')))
        for key in ('weights', 'bias', 'scales_px', 'mean', 'std', 'train_pitch_um'):
            if key not in json:
                raise FormatError('model document is missing {!r}'.format(key))
        if not isinstance(json['weights'], list):
            raise FormatError('weights must be a list')

        return SegmenterModel(
            weights=np.array(json['weights'], dtype=np.float64),
            bias=json['bias'],
            scales_px=json['scales_px'],
            mean=np.array(json['mean'], dtype=np.float64),
            std=np.array(json['std'], dtype=np.float64),
            train_pitch_um=json['train_pitch_um'],
            segmenter=json.get('segmenter'),
            model_id=json.get('model_id'),
            seed=json.get('seed'),
            epochs=json.get('epochs', 0),
            learning_rate=json.get('learning_rate'),
            loss_curve=json.get('loss_curve'),
            val_curve=json.get('val_curve')
        )

    def __repr__(self):
        return 'SegmenterModel(segmenter={!r}, model_id={!r}, features={!r}, train_pitch_um={!r})'.format(
            self.segmenter, self.model_id, self.feature_count, self.train_pitch_um
        )


class PredictionMask:

    THRESHOLD = 0.5

    def __init__(self, prob: np.ndarray) -> None:
        prob = np.asarray(prob, dtype=np.float64)
        if prob.ndim != 2:
            raise ValueError('prediction must be a 2D grid')
        self.prob = prob

    @property
    def ink(self) -> np.ndarray:
        return self.prob >= self.THRESHOLD

    @property
    def shape(self):
        return self.prob.shape

    def __repr__(self):
        return 'PredictionMask(shape={!r}, ink={!r})'.format(self.shape, int(np.count_nonzero(self.ink)))
