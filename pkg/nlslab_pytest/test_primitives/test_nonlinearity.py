import pytest
import numpy as np

from nlslab import Power, DoublePower, GrossPitaevskii, Tabulated
from nlslab._primitives.nonlinearity import (
    check_assumption1, kink_constants, nonlinearity_from_config, alpha_max,
    mass_critical_regime, eval_f, eval_g, eval_G,
)
from nlslab.exceptions import DomainError, ParameterError, NoKink, ConfigError


class TestModels:
    def test_power(self):
        nl = Power(2)
        assert nl.f(2.0) == pytest.approx(8.0)
        assert nl.f(1j) == pytest.approx(1j)
        assert nl.F(2.0) == pytest.approx(2.0 ** 4 / 4)
        assert nl.exponents == (2.0, 2.0)
        with pytest.raises(DomainError):
            nl.F(-1.0)
        with pytest.raises(ParameterError):
            Power(0)

    def test_double_power(self):
        nl = DoublePower(1, 2)
        s = np.linspace(0, 2, 11)
        assert np.allclose(nl.f_real(s), s ** 2 - s ** 3)
        assert np.allclose(nl.F(s), s ** 3 / 3 - s ** 4 / 4)
        inner = s[1:]
        assert np.allclose(nl.df_real(inner), 2 * inner - 3 * inner ** 2)
        with pytest.raises(ParameterError):
            DoublePower(2, 1)

    def test_gross_pitaevskii(self):
        nl = GrossPitaevskii()
        assert nl.g(0.0) == 1.0
        assert nl.f(0.0) == 0.0
        assert nl.f(1.0) == 0.0
        assert nl.G(2.0) == pytest.approx(0.0)

    def test_tabulated(self):
        s = np.linspace(0, 4, 41)
        nl = Tabulated(s, s ** 2, exponents=(4, 4))
        assert nl.g(2.0) == pytest.approx(4.0, rel=1e-10)
        assert nl.G(3.0) == pytest.approx(9.0, rel=1e-8)
        with pytest.raises(DomainError):
            nl.g(5.0)
        with pytest.raises(ParameterError):
            Tabulated(s, s ** 2 + 1)

    @pytest.mark.parametrize('nl', [
        Power(2), DoublePower(1, 2), GrossPitaevskii(),
        Tabulated(np.linspace(0, 4, 41), np.linspace(0, 4, 41) ** 2, exponents=(4, 4)),
    ], ids=['power', 'double_power', 'gross_pitaevskii', 'tabulated'])
    def test_phase_covariance(self, nl):
        rng = np.random.default_rng(1)
        rotation = np.exp(1j * rng.uniform(0, 2 * np.pi, 100))
        z = rng.uniform(0, 1.5, 100) * np.exp(1j * rng.uniform(0, 2 * np.pi, 100))
        deviation = np.abs(eval_f(nl, rotation * z) - rotation * eval_f(nl, z))
        assert np.max(deviation) < 1e-14

    def test_primitive_consistency(self):
        # F' = f on the real axis
        nl = DoublePower(1.5, 3)
        s = np.linspace(0.1, 1.5, 15)
        step = 1e-6
        slope = (nl.F(s + step) - nl.F(s - step)) / (2 * step)
        assert np.allclose(slope, nl.f_real(s), rtol=1e-7)

    def test_scalar_evaluation(self):
        nl = DoublePower(1, 2)
        s = np.array([0.0, 0.25, 1.0, 4.0])
        assert np.allclose(eval_g(nl, s), np.sqrt(s) - s)
        assert np.allclose(eval_G(nl, s), s ** 1.5 * 2 / 3 - s ** 2 / 2)
        assert eval_g(GrossPitaevskii(), 0.0) == 1.0
        for evaluate in (eval_g, eval_G):
            with pytest.raises(DomainError):
                evaluate(nl, -0.5)


class TestAssumptions:
    def test_power_subcritical(self):
        report = check_assumption1(Power(2), 1.0, 1)
        assert report.subcritical
        assert report.focusing
        assert report.g_vanishes
        assert report.alpha_max == np.inf
        assert report.mass_regime.regime == 'subcritical'

    def test_critical_regimes(self):
        assert alpha_max(3) == 4.0
        assert mass_critical_regime(Power(4), 1).regime == 'critical'
        assert mass_critical_regime(Power(5), 1).regime == 'supercritical'
        assert check_assumption1(Power(5), 1.0, 3).subcritical is False

    def test_double_power_focusing_window(self):
        nl = DoublePower(1, 2)
        # G(s) = ωs has a solution only below 2/9
        assert check_assumption1(nl, 0.2, 1).focusing
        assert not check_assumption1(nl, 0.25, 1).focusing

    def test_gross_pitaevskii_nonzero(self):
        assert not check_assumption1(GrossPitaevskii(), 1.0, 1).g_vanishes

    def test_alpha_mid(self):
        report = check_assumption1(Power(2, alpha_mid=3.0), 1.0, 1)
        assert report.alpha_mid == 3.0


class TestKinkConstants:
    def test_double_power(self):
        constants = kink_constants(DoublePower(1, 2))
        assert constants.omega0 == pytest.approx(2 / 9, abs=1e-12)
        assert constants.b == pytest.approx(2 / 3, abs=1e-12)
        assert constants.hprime_at_b == pytest.approx(2 / 9, abs=1e-10)
        assert max(constants.residuals(DoublePower(1, 2))) < 1e-12

    def test_focusing_has_no_kink(self):
        with pytest.raises(NoKink):
            kink_constants(Power(2))


class TestConfig:
    @pytest.mark.parametrize('nl', [
        Power(2), DoublePower(1, 2), GrossPitaevskii(),
        Tabulated([0, 1, 2, 3], [0, 1, 4, 9]),
    ])
    def test_round_trip(self, nl):
        assert nonlinearity_from_config(nl.to_config()) == nl

    def test_errors(self):
        with pytest.raises(ConfigError) as err:
            nonlinearity_from_config({'kind': 'cubic'})
        assert err.value.path == 'nonlinearity.kind'
        with pytest.raises(ConfigError) as err:
            nonlinearity_from_config({'kind': 'power'})
        assert err.value.path == 'nonlinearity.alpha'
        with pytest.raises(ConfigError):
            nonlinearity_from_config({'kind': 'power', 'alpha': -1})
        with pytest.raises(ConfigError):
            nonlinearity_from_config([1, 2])
