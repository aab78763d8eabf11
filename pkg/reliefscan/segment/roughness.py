import logging
from typing import Sequence

import numpy as np

from reliefscan.models.segmenter import SegmenterModel, feature_names
from reliefscan.segment import (Hyperparameters, SegmenterBase, TrainingSample,
                                check_training_set)
from reliefscan.segment.logistic import pool_pixels
from reliefscan.utils.rng import make_rng

LOG = logging.getLogger('reliefscan.segment')

CANDIDATES = 199


def _dice_counts(pred: np.ndarray, y: np.ndarray) -> float:
    total = pred.sum() + y.sum()
    return 1.0 if total == 0 else 2.0 * np.sum(pred & y) / total


class RoughnessSegmenter(SegmenterBase):
    """Ink where finest-scale micro-roughness falls below a threshold fitted for training Dice."""

    def fit(self, samples: Sequence[TrainingSample], hyper: Hyperparameters) -> SegmenterModel:
        samples = check_training_set(samples)
        rng = make_rng(hyper.seed)
        x, y = pool_pixels(samples, hyper, rng)

        scales = hyper.scales_px
        index = feature_names(scales).index('roughness_s{}'.format(min(scales)))
        feature = x[:, index]
        ink = y > 0.5

        thresholds = np.unique(np.percentile(feature, np.linspace(0.5, 99.5, CANDIDATES)))
        scores = [_dice_counts(feature <= t, ink) for t in thresholds]
        best = int(np.argmax(scores))
        threshold = float(thresholds[best])

        count = len(feature_names(scales))
        spread = float(feature.std()) or 1.0
        weights = np.zeros(count)
        weights[index] = -1.0
        mean = np.zeros(count)
        mean[index] = threshold
        std = np.ones(count)
        std[index] = spread

        LOG.debug('Roughness threshold %.6g gives training Dice %.4f', threshold, scores[best])
        return SegmenterModel(
            weights, 0.0, scales, mean, std,
            train_pitch_um=samples[0].image.pitch_um,
            segmenter='roughness',
            model_id=hyper.model_id,
            seed=hyper.seed,
            epochs=0
        )
