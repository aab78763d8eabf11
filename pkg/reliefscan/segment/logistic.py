import logging
from typing import Sequence, Tuple

import numpy as np

from reliefscan.exceptions import SegmenterError, TrainingError
from reliefscan.models.segmenter import SegmenterModel
from reliefscan.segment import (Hyperparameters, SegmenterBase, TrainingSample,
                                check_training_set, sample_pixels)
from reliefscan.segment.augment import augment
from reliefscan.segment.features import extract_features
from reliefscan.segment.loss import composite_loss, composite_loss_grad
from reliefscan.utils.rng import make_rng

LOG = logging.getLogger('reliefscan.segment')

AUGMENT_SEED_OFFSET = 7919


class Adam:

    def __init__(self, size: int, learning_rate: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8) -> None:
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        m_hat = self.m / (1.0 - self.beta1 ** self.t)
        v_hat = self.v / (1.0 - self.beta2 ** self.t)
        return params - self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)


def pool_pixels(samples: Sequence[TrainingSample], hyper: Hyperparameters,
                rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Stack sampled feature rows and labels from every sample and its augmented copies."""
    xs, ys = [], []
    for i, sample in enumerate(samples):
        variants = [sample]
        for c in range(hyper.augment_copies):
            seed = hyper.seed + AUGMENT_SEED_OFFSET * (i + 1) + c
            variants.append(TrainingSample(*augment(sample.image, sample.labels, seed)))
        for image, labels in variants:
            stack = extract_features(image, hyper.scales_px)
            index = sample_pixels(rng, labels.ink.size, hyper.pixels_per_sample)
            xs.append(stack.pixels(index))
            ys.append(labels.ink.ravel()[index].astype(np.float64))
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    if y.min() == y.max():
        raise SegmenterError('single-class training pool after pixel sampling; raise pixels_per_sample')
    return x, y


def fit_standardization(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std[std == 0] = 1.0
    return mean, std


class LogisticSegmenter(SegmenterBase):
    """Multiscale topographic features with a logistic classifier trained on Dice plus cross-entropy."""

    def fit(self, samples: Sequence[TrainingSample], hyper: Hyperparameters) -> SegmenterModel:
        samples = check_training_set(samples)
        rng = make_rng(hyper.seed)

        x, y = pool_pixels(samples, hyper, rng)
        order = rng.permutation(len(y))
        n_val = int(len(y) * hyper.validation_frac)
        val_idx, train_idx = order[:n_val], order[n_val:]
        if n_val == 0:
            val_idx = train_idx

        mean, std = fit_standardization(x[train_idx])
        xs = (x - mean) / std

        weights, bias, epochs_run, loss_curve, val_curve = train_logistic(xs, y, train_idx, val_idx, hyper, rng)

        model = SegmenterModel(
            weights, bias, hyper.scales_px, mean, std,
            train_pitch_um=samples[0].image.pitch_um,
            segmenter='logistic',
            model_id=hyper.model_id,
            seed=hyper.seed,
            epochs=epochs_run,
            learning_rate=hyper.learning_rate,
            loss_curve=loss_curve,
            val_curve=val_curve
        )
        LOG.debug('Trained %r on %d pixels (%d validation) in %d epochs', model, len(train_idx), n_val, epochs_run)
        return model


def train_logistic(xs: np.ndarray, y: np.ndarray, train_idx: np.ndarray, val_idx: np.ndarray,
                   hyper: Hyperparameters, rng: np.random.Generator):
    """
    Minibatch Adam on standardized features with early stopping on the
    validation loss. Returns the best weights seen.
    """
    count = xs.shape[1]
    theta = np.zeros(count + 1)
    adam = Adam(count + 1, learning_rate=hyper.learning_rate)
    batch = max(1, hyper.batch_pixels)

    def loss_on(index):
        return composite_loss(xs[index] @ theta[:-1] + theta[-1], y[index])

    best_loss, best_theta, stale = np.inf, theta.copy(), 0
    loss_curve, val_curve = [], []
    epoch = 0
    for epoch in range(1, hyper.epochs + 1):
        shuffled = rng.permutation(train_idx)
        for start in range(0, len(shuffled), batch):
            idx = shuffled[start:start + batch]
            xb = xs[idx]
            loss, g = composite_loss_grad(xb @ theta[:-1] + theta[-1], y[idx])
            if not np.isfinite(loss):
                raise TrainingError('training loss is not finite', epoch=epoch)
            theta = adam.step(theta, np.append(xb.T @ g, g.sum()))

        train_loss = loss_on(train_idx)
        val_loss = loss_on(val_idx)
        if not (np.isfinite(train_loss) and np.isfinite(val_loss)):
            raise TrainingError('training loss is not finite', epoch=epoch)
        loss_curve.append(train_loss)
        val_curve.append(val_loss)
        LOG.debug('epoch %d: loss %.6f, validation %.6f', epoch, train_loss, val_loss)

        if val_loss < best_loss:
            best_loss, best_theta, stale = val_loss, theta.copy(), 0
        else:
            stale += 1
            if stale >= hyper.patience:
                LOG.debug('Early stop at epoch %d, best validation loss %.6f', epoch, best_loss)
                break

    return best_theta[:-1], float(best_theta[-1]), epoch, loss_curve, val_curve
