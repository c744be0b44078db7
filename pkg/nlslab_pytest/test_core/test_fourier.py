import numpy as np

from nlslab._core import fourier

from ..utility import line


class TestFourier:
    def test_round_trip(self):
        rng = np.random.default_rng(7)
        values = rng.normal(size=256) + 1j * rng.normal(size=256)
        assert np.allclose(fourier.backward(fourier.forward(values)), values)

    def test_multiplier(self):
        grid = line(2 * np.pi, 32)
        x, = grid.coordinates()
        values = np.exp(2j * x)
        shifted = fourier.apply_multiplier(values, np.exp(-1j * grid.k_squared()))
        assert np.allclose(shifted, np.exp(-4j) * values)

    def test_identity_multiplier(self):
        values = np.arange(16, dtype=complex)
        assert np.allclose(fourier.apply_multiplier(values, np.ones(16)), values)
