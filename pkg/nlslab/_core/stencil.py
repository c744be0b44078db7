"""
Central finite differences of eighth order on uniform samples

Only the interior is differentiated: the first and last :py:data:`WIDTH`
samples have no complete stencil and are dropped from the result.
"""
import numpy as np

#: number of samples lost on each side
WIDTH = 4

_FIRST = np.array([
    1 / 280, -4 / 105, 1 / 5, -4 / 5, 0.0, 4 / 5, -1 / 5, 4 / 105, -1 / 280
])
_SECOND = np.array([
    -1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560
])


def first_derivative(samples: np.ndarray, spacing: float) -> np.ndarray:
    """Derivative at ``samples[WIDTH:-WIDTH]``"""
    # np.convolve flips the kernel, the first derivative stencil is odd
    return np.convolve(samples, _FIRST[::-1], mode='valid') / spacing


def second_derivative(samples: np.ndarray, spacing: float) -> np.ndarray:
    """Second derivative at ``samples[WIDTH:-WIDTH]``"""
    return np.convolve(samples, _SECOND, mode='valid') / spacing ** 2
