"""Platt scaling: P(positive | score) = 1 / (1 + exp(A * score + B))."""

import math
from typing import Tuple

import numpy as np
from scipy.special import expit

MAX_ITER = 100
MIN_STEP = 1e-10
RIDGE = 1e-12
TOLERANCE = 1e-5


def _objective(scores: np.ndarray, targets: np.ndarray, a: float, b: float) -> float:
    z = a * scores + b
    return float(np.sum(np.logaddexp(0.0, z) - (1.0 - targets) * z))


def fit_platt(scores: np.ndarray, positive: np.ndarray) -> Tuple[float, float]:
    """Newton's method with backtracking on smoothed targets; A is clamped to <= 0
    so the probability never falls as the score grows."""
    scores = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    n_pos = int(positive.sum())
    n_neg = len(positive) - n_pos
    targets = np.where(positive, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))

    a, b = 0.0, math.log((n_neg + 1.0) / (n_pos + 1.0))
    value = _objective(scores, targets, a, b)
    for _ in range(MAX_ITER):
        p = expit(-(a * scores + b))
        weight = p * (1.0 - p)
        residual = targets - p
        g1, g2 = float(scores @ residual), float(residual.sum())
        if abs(g1) < TOLERANCE and abs(g2) < TOLERANCE:
            break
        h11 = float(scores**2 @ weight) + RIDGE
        h22 = float(weight.sum()) + RIDGE
        h21 = float(scores @ weight)
        det = h11 * h22 - h21 * h21
        da = -(h22 * g1 - h21 * g2) / det
        db = -(-h21 * g1 + h11 * g2) / det
        slope = g1 * da + g2 * db

        step = 1.0
        while step >= MIN_STEP:
            new_a, new_b = a + step * da, b + step * db
            new_value = _objective(scores, targets, new_a, new_b)
            if new_value < value + 1e-4 * step * slope:
                a, b, value = new_a, new_b, new_value
                break
            step /= 2.0
        else:
            break
    return min(a, 0.0), b


def platt_probability(scores: np.ndarray, a: float, b: float) -> np.ndarray:
    return expit(-(a * np.asarray(scores, dtype=np.float64) + b))
