import pytest
import numpy as np

from nlslab import Grid, RadialGrid, Power, DoublePower, ground_state, kink
from nlslab._primitives.profiles import (
    ProfileKind, ground_state_power_1d, ground_state_shoot, gp_kink,
    mirror_profile, stationary_residual, save_profile, load_profile,
    sample_profile, scale_profile,
)
from nlslab.exceptions import TruncationError, SpeedAboveSound, ParameterError

from ..utility import line


class TestGroundState:
    def test_cubic_closed_form(self):
        profile = ground_state_power_1d(2.0, 1.0, line(40.0, 1024))
        assert profile.kind == ProfileKind.GROUND_STATE
        assert profile(0.0) == pytest.approx(np.sqrt(2))
        x = np.linspace(-5, 5, 11)
        assert np.allclose(profile(x), np.sqrt(2) / np.cosh(x))
        assert profile.residual < 1e-10
        assert profile.decay_rate_a == pytest.approx(1.0)

    @pytest.mark.parametrize('alpha', [1.0, 2.0, 3.0])
    @pytest.mark.parametrize('omega', [0.25, 1.0, 4.0])
    def test_residuals(self, alpha, omega):
        assert ground_state(Power(alpha), omega).residual < 1e-10

    def test_truncation(self):
        with pytest.raises(TruncationError):
            ground_state_power_1d(2.0, 1.0, line(10.0, 256))

    def test_invalid(self):
        with pytest.raises(ParameterError):
            ground_state_power_1d(2.0, -1.0, line())
        with pytest.raises(ParameterError):
            ground_state_power_1d(2.0, 1.0, Grid.regular(40.0, 64, d=2))

    def test_scaling(self):
        base = ground_state(Power(2), 1.0)
        scaled = scale_profile(base, 4.0, 2.0)
        exact = ground_state_power_1d(2.0, 4.0, line(40.0, 1024))
        x = np.linspace(-3, 3, 13)
        assert scaled.omega == 4.0
        assert np.allclose(scaled(x), exact(x), atol=1e-12)
        with pytest.raises(ParameterError):
            scale_profile(base, 4.0, 3.0)

    @pytest.mark.slow
    def test_shooting_matches_closed_form(self):
        exact = ground_state_power_1d(2.0, 1.0, line(80.0, 4096))
        shot = ground_state_shoot(Power(2), 1.0, 1, RadialGrid(40.0, 4001))
        radii = shot.positions()
        assert np.max(np.abs(shot(radii) - exact(radii))) < 1e-6
        assert shot.residual < 1e-6

    def test_sampling(self):
        profile = ground_state(Power(2), 1.0)
        grid = line(40.0, 512)
        values = sample_profile(profile, grid, center=(3.0,))
        assert np.argmax(np.abs(values)) == np.argmin(np.abs(grid.axes()[0] - 3.0))


class TestKink:
    def test_double_power(self):
        nl = DoublePower(1.0, 2.0)
        profile = kink(nl)
        assert profile.kind == ProfileKind.KINK
        assert profile.omega == pytest.approx(2 / 9)
        assert profile.residual < 1e-8
        assert profile.limit_minus_inf == pytest.approx(2 / 3)
        assert profile.limit_plus_inf == 0.0
        assert profile.samples[0] == pytest.approx(2 / 3, abs=1e-10)
        assert abs(profile.samples[-1]) < 1e-10
        assert np.all(np.diff(profile.samples) <= 1e-14)

    def test_mirror(self):
        profile = kink(DoublePower(1.0, 2.0))
        mirrored = mirror_profile(profile)
        x = np.linspace(-10, 10, 21)
        assert np.allclose(mirrored(x), profile(-x))
        assert np.allclose(mirrored.derivative(x), -profile.derivative(-x))
        assert mirrored.limit_minus_inf == 0.0
        assert mirrored.limit_plus_inf == pytest.approx(2 / 3)
        assert mirror_profile(mirrored).mirrored is False
        assert stationary_residual(mirrored) == pytest.approx(profile.residual)

    def test_gross_pitaevskii(self):
        grid = line(60.0, 1024)
        profile = gp_kink(0.5, grid)
        assert profile.intrinsic_velocity == 0.5
        assert profile.residual < 1e-10
        assert abs(profile(0.0)) == pytest.approx(0.5 / np.sqrt(2))
        dark = gp_kink(0.0, grid)
        assert dark.limit_minus_inf == pytest.approx(-1.0)
        assert dark.limit_plus_inf == pytest.approx(1.0)

    @pytest.mark.parametrize('c', [np.sqrt(2), 1.5, -2.0])
    def test_speed_of_sound(self, c):
        with pytest.raises(SpeedAboveSound):
            gp_kink(c, line())


class TestPersistence:
    def test_ground_state(self, tmp_path):
        profile = ground_state_power_1d(2.0, 1.0, line(40.0, 1024))
        loaded = load_profile(save_profile(profile, tmp_path / 'g.nlsp'), Power(2))
        assert loaded.kind == ProfileKind.GROUND_STATE
        assert np.allclose(loaded.samples, profile.samples, rtol=0, atol=1e-15)
        assert loaded.residual < 1e-6

    def test_kink(self, tmp_path):
        nl = DoublePower(1.0, 2.0)
        profile = kink(nl)
        loaded = load_profile(save_profile(profile, tmp_path / 'k.nlsp'), nl)
        assert loaded.kind == ProfileKind.KINK
        assert loaded.limit_minus_inf == pytest.approx(2 / 3)

    def test_gross_pitaevskii(self, tmp_path):
        profile = gp_kink(0.5, line(60.0, 1024))
        loaded = load_profile(save_profile(profile, tmp_path / 'gp.nlsp'))
        assert loaded.intrinsic_velocity == pytest.approx(0.5)
        assert loaded.residual < 1e-10
