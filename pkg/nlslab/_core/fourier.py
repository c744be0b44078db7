r"""
Discrete Fourier transforms for fields on periodic boxes

All spectral work of :py:mod:`nlslab` goes through :py:func:`forward`
and :py:func:`backward`, which wrap :py:mod:`scipy.fft` over all axes of a
field. The number of worker threads used by :py:mod:`scipy.fft` is read
once from the environment variable ``NLSLAB_FFT_WORKERS``; it defaults to
a single worker so that results are bit-identical between runs.
"""
import os

import numpy as np
import scipy.fft


def forward(values: np.ndarray) -> np.ndarray:
    """Unnormalised forward transform over all axes"""
    return scipy.fft.fftn(values, workers=FFT_WORKERS)


def backward(spectrum: np.ndarray) -> np.ndarray:
    """Inverse of :py:func:`forward`"""
    return scipy.fft.ifftn(spectrum, workers=FFT_WORKERS)


def apply_multiplier(values: np.ndarray, multiplier: np.ndarray) -> np.ndarray:
    """Apply a Fourier multiplier, i.e. ``backward(multiplier * forward(values))``"""
    return scipy.fft.ifftn(
        multiplier * scipy.fft.fftn(values, workers=FFT_WORKERS),
        workers=FFT_WORKERS,
    )


WORKERS_KEY = 'NLSLAB_FFT_WORKERS'
try:
    FFT_WORKERS = int(os.environ.get(WORKERS_KEY, '1'))
except ValueError:
    raise EnvironmentError(
        'Invalid %r: %r' % (WORKERS_KEY, os.environ.get(WORKERS_KEY))
    ) from None
if FFT_WORKERS == 0:
    raise EnvironmentError('Invalid %r: 0 workers' % WORKERS_KEY)
