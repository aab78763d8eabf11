from typing import Tuple

import numpy as np
from scipy.special import expit

SMOOTH = 1e-5


def soft_dice_loss(p: np.ndarray, y: np.ndarray) -> float:
    intersection = float(np.sum(p * y))
    total = float(np.sum(p) + np.sum(y))
    return 1.0 - (2.0 * intersection + SMOOTH) / (total + SMOOTH)


def cross_entropy(z: np.ndarray, y: np.ndarray) -> float:
    """Mean binary cross-entropy on logits: softplus(z) - y*z."""
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def composite_loss(z: np.ndarray, y: np.ndarray) -> float:
    z = np.asarray(z, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    return soft_dice_loss(expit(z), y) + cross_entropy(z, y)


def composite_loss_grad(z: np.ndarray, y: np.ndarray) -> Tuple[float, np.ndarray]:
    """Soft-Dice plus mean cross-entropy and its gradient with respect to the logits."""
    shape = np.shape(z)
    z = np.asarray(z, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    p = expit(z)

    intersection = float(np.sum(p * y))
    denom = float(np.sum(p) + np.sum(y)) + SMOOTH
    numer = 2.0 * intersection + SMOOTH
    loss = (1.0 - numer / denom) + cross_entropy(z, y)

    d_dice_dp = -(2.0 * y * denom - numer) / denom ** 2
    grad = (p - y) / z.size + d_dice_dp * p * (1.0 - p)
    return loss, grad.reshape(shape)
