import abc
import logging
from typing import Any, Dict, List, NamedTuple, Sequence

import numpy as np
from scipy.special import expit

from reliefscan.exceptions import DimensionMismatch, SegmenterError
from reliefscan.models.heightmap import LabelMask
from reliefscan.models.image import NormalizedImage
from reliefscan.models.segmenter import PredictionMask, SegmenterModel
from reliefscan.segment.features import extract_features

LOG = logging.getLogger('reliefscan.segment')

TrainingSample = NamedTuple('TrainingSample', [
    ('image', NormalizedImage),
    ('labels', LabelMask)
])


class Hyperparameters:
    """Training knobs shared by every segmenter."""

    def __init__(self, **kwargs) -> None:
        self.learning_rate = float(kwargs.get('learning_rate', 1e-3))
        self.epochs = int(kwargs.get('epochs', 100))
        self.seed = int(kwargs.get('seed', 0))
        self.batch_pixels = int(kwargs.get('batch_pixels', 4096))
        self.pixels_per_sample = int(kwargs.get('pixels_per_sample', 8192))
        self.patience = int(kwargs.get('patience', 10))
        self.validation_frac = float(kwargs.get('validation_frac', 0.1))
        self.scales_px = [int(s) for s in kwargs.get('scales_px', [1, 2, 4, 8, 16])]
        self.augment_copies = int(kwargs.get('augment_copies', 1))
        self.model_id = kwargs.get('model_id', None) or ''

    @classmethod
    def from_config(cls, config: Dict[str, Any], **overrides) -> 'Hyperparameters':
        values = dict(
            learning_rate=config['LEARNING_RATE'],
            epochs=config['EPOCHS'],
            seed=config['SEED'],
            batch_pixels=config['BATCH_PIXELS'],
            pixels_per_sample=config['PIXELS_PER_SAMPLE'],
            patience=config['PATIENCE'],
            validation_frac=config['VALIDATION_FRAC'],
            scales_px=config['FEATURE_SCALES'],
            augment_copies=config['AUGMENT_COPIES']
        )
        values.update(overrides)
        return Hyperparameters(**values)

    def replace(self, **changes) -> 'Hyperparameters':
        values = self.serialize
        values.update(changes)
        return Hyperparameters(**values)

    @property
    def serialize(self) -> Dict[str, Any]:
        return {
            'learning_rate': self.learning_rate,
            'epochs': self.epochs,
            'seed': self.seed,
            'batch_pixels': self.batch_pixels,
            'pixels_per_sample': self.pixels_per_sample,
            'patience': self.patience,
            'validation_frac': self.validation_frac,
            'scales_px': list(self.scales_px),
            'augment_copies': self.augment_copies,
            'model_id': self.model_id
        }

    def __repr__(self):
        return 'Hyperparameters(lr={!r}, epochs={!r}, seed={!r}, scales_px={!r})'.format(
            self.learning_rate, self.epochs, self.seed, self.scales_px)


class SegmenterBase(metaclass=abc.ABCMeta):

    def __init__(self, name=None):
        self.name = name or self.__module__
        if self.__doc__:
            LOG.debug('\n{}\n'.format(self.__doc__))

    @abc.abstractmethod
    def fit(self, samples: Sequence[TrainingSample], hyper: Hyperparameters) -> SegmenterModel:
        """Learn a per-pixel ink classifier from images and their labels."""
        raise NotImplementedError

    def predict(self, model: SegmenterModel, image: NormalizedImage) -> PredictionMask:
        return predict(model, image)


def predict(model: SegmenterModel, image: NormalizedImage) -> PredictionMask:
    """Per-pixel ink probability logistic(w.f + b), thresholded at 0.5."""
    stack = extract_features(image, model.scales_px)
    logits = model.logits(stack.pixels())
    return PredictionMask(expit(logits).reshape(stack.shape))


def check_training_set(samples: Sequence[TrainingSample]) -> List[TrainingSample]:
    samples = list(samples)
    if not samples:
        raise SegmenterError('training needs at least one sample')
    for s in samples:
        if s.image.shape != s.labels.shape:
            raise DimensionMismatch('image {} and labels {} differ in shape'.format(s.image.shape, s.labels.shape))
    ink = sum(s.labels.ink_pixels for s in samples)
    total = sum(s.labels.ink.size for s in samples)
    if ink == 0 or ink == total:
        raise SegmenterError('single-class training set: {} of {} pixels are ink'.format(ink, total))
    return samples


def sample_pixels(rng: np.random.Generator, size: int, count: int) -> np.ndarray:
    """Sorted flat indices of count pixels drawn without replacement; all pixels if count is 0 or too large."""
    if count <= 0 or count >= size:
        return np.arange(size)
    return np.sort(rng.choice(size, size=count, replace=False))
