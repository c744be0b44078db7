import pytest
import numpy as np

from nlslab._core.stencil import first_derivative, second_derivative, WIDTH


class TestStencil:
    def test_polynomials_exact(self):
        h = 0.1
        x = np.arange(40) * h
        samples = x ** 5
        interior = x[WIDTH:-WIDTH]
        first = first_derivative(samples, h)
        second = second_derivative(samples, h)
        assert first.shape == interior.shape
        assert np.allclose(first, 5 * interior ** 4, rtol=1e-10)
        assert np.allclose(second, 20 * interior ** 3, rtol=1e-9)

    @pytest.mark.parametrize('count', [64, 128])
    def test_sine(self, count):
        x = np.linspace(0.0, 2 * np.pi, count)
        h = x[1] - x[0]
        interior = x[WIDTH:-WIDTH]
        assert np.max(np.abs(first_derivative(np.sin(x), h) - np.cos(interior))) < 1e-8
        assert np.max(np.abs(second_derivative(np.sin(x), h) + np.sin(interior))) < 1e-8
