import pytest
import numpy as np

from nlslab import Power, DoublePower, WaveSpec, boost, boost_soliton, boost_kink,\
    boost_jet, kink
from nlslab.exceptions import ParameterError

from ..utility import soliton


class TestWaveSpec:
    def test_frequency_mismatch(self):
        spec = soliton(omega=1.0)
        with pytest.raises(ParameterError):
            WaveSpec(spec.profile, omega=2.0)
        with pytest.raises(ParameterError):
            WaveSpec(spec.profile, c=1.0)

    def test_velocity(self):
        spec = soliton(v=3.0, x0=1.0)
        assert spec.x0 == (1.0,)
        assert spec.velocity == (3.0,)
        assert spec.speed == 3.0
        assert not spec.is_kink
        assert spec.replace(v=-4.0).speed == 4.0

    def test_shifted(self):
        spec = soliton(omega=0.5, v=2.0, x0=-3.0, gamma=0.25)
        x = np.linspace(-10, 10, 101)
        assert np.allclose(boost(spec.shifted(1.5), 0.5, x), boost(spec, 2.0, x))


class TestBoost:
    def test_modulus(self):
        spec = soliton(v=2.0, x0=-1.0)
        x = np.linspace(-10, 10, 201)
        assert np.allclose(
            np.abs(boost_soliton(spec, 1.0, x)), spec.profile(x - 2.0 + 1.0)
        )

    def test_kind_checks(self):
        with pytest.raises(ParameterError):
            boost_kink(soliton(), 0.0, np.zeros(3))
        with pytest.raises(ParameterError):
            boost_soliton(WaveSpec(kink(DoublePower(1, 2))), 0.0, np.zeros(3))

    @pytest.mark.parametrize('v', [0.0, 3.0, -1.5])
    def test_jet_solves_equation(self, v):
        nl = Power(2)
        spec = soliton(omega=1.0, v=v, x0=1.0, gamma=0.5)
        x = np.linspace(-15, 15, 301)
        value, time_derivative, laplacian = boost_jet(spec, 0.7, x)
        residual = 1j * time_derivative + laplacian + nl.f(value)
        assert np.max(np.abs(residual)) < 1e-10
        step = 1e-5
        difference = (boost(spec, 0.7 + step, x) - boost(spec, 0.7 - step, x)) / (2 * step)
        assert np.allclose(time_derivative, difference, atol=1e-6)

    def test_kink_jet(self):
        nl = DoublePower(1, 2)
        spec = WaveSpec(kink(nl), v=0.5, x0=2.0)
        x = np.linspace(-20, 20, 201)
        value, time_derivative, laplacian = boost_jet(spec, 1.0, x)
        assert np.max(np.abs(1j * time_derivative + laplacian + nl.f(value))) < 1e-10
