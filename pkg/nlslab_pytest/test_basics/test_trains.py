import logging
import math

import pytest
import numpy as np

from nlslab import Grid, DoublePower, Power, WaveSpec, TrainSpec, TrainFamily,\
    kink, sum_profile, ground_state
from nlslab._basics.trains import (
    japanese_bracket, generate_train_params, truncation_order, truncate_train,
    validate_theorem1, validate_theorem2, validate_theorem3, validate_theorem4,
    train_from_config, train_to_config, kink_train_nonlinearity, INFINITE_PREVIEW,
)
from nlslab.exceptions import ParameterError, ConfigError

from ..utility import line, soliton, soliton_train


class TestTrainSpec:
    def test_derived(self):
        train = soliton_train(soliton(omega=1.0, v=-0.5), soliton(omega=0.5, v=0.5))
        assert train.N == 2
        assert len(train) == 2
        assert train.derived.omega_star == pytest.approx(0.25)
        assert train.derived.v_star_T1 == pytest.approx(1.0)
        # r0 = max(1, dα/2) + 1
        assert train.r0 == 2.0

    def test_empty(self):
        with pytest.raises(ParameterError):
            TrainSpec(())

    def test_kink_position(self):
        spec = WaveSpec(kink(DoublePower(1, 2)))
        with pytest.raises(ParameterError):
            TrainSpec([spec])

    def test_kink_velocities(self):
        left = WaveSpec(kink(DoublePower(1, 2)))
        with pytest.raises(ParameterError):
            TrainSpec([soliton(v=-1.0)], left_kink=left, alpha=1.0)

    def test_bracket(self):
        assert japanese_bracket((3.0, 4.0)) == pytest.approx(math.sqrt(26))
        assert japanese_bracket((0.0,)) == 1.0


class TestSumProfile:
    def test_separated_masses(self):
        grid = line(60.0, 1024)
        train = soliton_train(soliton(x0=-10.0, v=-1.0), soliton(x0=10.0, v=1.0))
        field = sum_profile(train, 0.0, grid)
        # M = ½‖u‖² = 2 per cubic soliton at ω = 1
        assert 0.5 * field.l2() ** 2 == pytest.approx(4.0, rel=1e-6)

    def test_shifted(self):
        grid = line(60.0, 1024)
        train = soliton_train(soliton(x0=-5.0, v=-1.0, gamma=0.3), soliton(x0=5.0, v=1.0))
        later = sum_profile(train, 1.5, grid)
        shifted = sum_profile(train.shifted(1.5), 0.0, grid)
        assert np.allclose(later.values, shifted.values, atol=1e-12)

    def test_infinite(self):
        train = generate_train_params(TrainFamily(0.25, 1.0, 10.0), 2.0, 1)
        with pytest.raises(ParameterError):
            sum_profile(train, 0.0, line())

    def test_dimension(self):
        with pytest.raises(ParameterError):
            sum_profile(soliton_train(soliton()), 0.0, Grid.regular(20.0, 64, d=2))


class TestFamilies:
    def test_parameters(self):
        train = generate_train_params(TrainFamily(0.25, 1.0, 10.0, N=3), 2.0, 1)
        assert [spec.omega for spec in train.components] == [1.0, 0.25, 0.0625]
        assert [spec.v[0] for spec in train.components] == [0.0, 20.0, 60.0]
        assert all(spec.x0 == (0.0,) for spec in train.components)
        assert not train.infinite

    def test_phases(self):
        family = TrainFamily(0.5, 1.0, 1.0, N=3, phases='alternating')
        train = generate_train_params(family, 2.0, 1)
        assert [spec.gamma for spec in train.components] == [0.0, math.pi, 0.0]

    def test_invalid(self):
        with pytest.raises(ParameterError):
            generate_train_params(TrainFamily(1.5, 1.0, 10.0), 2.0, 1)
        with pytest.raises(ParameterError):
            generate_train_params(TrainFamily(0.5, 1.0, 10.0, N=0), 2.0, 1)

    def test_infinite_preview(self):
        train = generate_train_params(TrainFamily(0.25, 1.0, 20.0), 2.0, 1)
        assert train.infinite
        assert train.N == INFINITE_PREVIEW

    def test_truncation(self):
        family = TrainFamily(0.25, 1.0, 20.0)
        # Σ_{j>N} 4^{-j/4} < 1e-3 first holds at N = 24
        assert truncation_order(family, 0.25, 1e-3) == 24
        truncated = truncate_train(generate_train_params(family, 2.0, 1), 1e-3)
        assert truncated.N == 24
        assert not truncated.infinite
        assert truncated.metadata['tail_bound'] < 1e-3
        assert truncated.family == family

    def test_geometric_tail(self):
        family = TrainFamily(0.25, 1.0, 20.0)
        partial = sum(family.omega(j) ** 0.25 for j in range(7, 400))
        assert family.geometric_tail(0.25, 6) == pytest.approx(partial, rel=1e-12)
        assert family.geometric_tail(-1.0, 6) == math.inf


class TestTheorems:
    def test_multi_soliton(self):
        report = validate_theorem1(
            soliton_train(soliton(v=-0.5), soliton(omega=0.5, v=0.5))
        )
        assert report.admissible
        assert report.v_star == pytest.approx(1.0)
        colliding = validate_theorem1(soliton_train(soliton(x0=-5), soliton(x0=5)))
        assert colliding.colliding and not colliding.admissible
        assert validate_theorem1(soliton_train(soliton())).unconstrained

    def test_infinite_train(self):
        train = generate_train_params(TrainFamily(0.25, 1.0, 20.0), 2.0, 1)
        report = validate_theorem2(train, 2.0, 2.0, 0.5)
        assert report.integrability_exponent == pytest.approx(0.25)
        assert report.v_star == pytest.approx(20.0)
        assert report.high_speeds
        assert report.integrable
        assert report.uniform_bound.holds
        # scaled profiles share a single bound constant
        assert report.uniform_bound.spread < 1e-8
        assert report.gradient_bound_required is None
        assert report.admissible

    def test_gradient_bound(self):
        train = generate_train_params(TrainFamily(0.25, 1.0, 20.0), 0.5, 1)
        report = validate_theorem2(train, 0.5, 2.0, 0.5, alpha2=4.0)
        assert report.gradient_bound_required
        assert math.isfinite(report.V_star_tail)

    def test_invalid_exponents(self):
        train = soliton_train(soliton())
        with pytest.raises(ParameterError):
            validate_theorem2(train, 2.0, 1.0, 0.5)
        with pytest.raises(ParameterError):
            validate_theorem2(train, 2.0, 2.0, 1.0)

    @pytest.mark.slow
    def test_kink_trains(self):
        nl = DoublePower(1, 2)
        train = TrainSpec(
            [WaveSpec(ground_state(nl, 0.1), x0=20.0, v=4.0)],
            left_kink=WaveSpec(kink(nl)), alpha=1.0,
        )
        report = validate_theorem3(train)
        assert report.admissible
        assert report.v_star == pytest.approx(4.0)
        assert report.left_kink and not report.right_kink
        windowed = validate_theorem4(train, 1.0, 2.0)
        assert windowed.first_branch and not windowed.second_branch
        assert windowed.train.integrability_partial > \
            validate_theorem2(train, 1.0, 2.0, 0.5).integrability_partial
        assert kink_train_nonlinearity(train) == nl

    @pytest.mark.slow
    def test_kink_train_default_exponent(self, caplog):
        nl = DoublePower(1, 2)
        # no alpha, so the train carries no integrability exponent
        train = TrainSpec(
            [WaveSpec(ground_state(nl, 0.1), x0=20.0, v=4.0)],
            left_kink=WaveSpec(kink(nl)),
        )
        assert math.isnan(train.r0)
        with caplog.at_level(logging.WARNING, logger='nlslab._basics.trains'):
            report = validate_theorem4(train, 1.0, 2.0)
        assert 'using r0=2 for alpha=1' in caplog.text
        assert report.train.integrability_exponent == pytest.approx(0.75)
        caplog.clear()
        with caplog.at_level(logging.WARNING, logger='nlslab._basics.trains'):
            explicit = validate_theorem4(train, 1.0, 2.0, r0=2.0)
        assert 'integrability exponent' not in caplog.text
        assert explicit.train.integrability_partial == \
            report.train.integrability_partial

    def test_exponent_window(self):
        train = soliton_train(soliton())
        report = validate_theorem4(train, 1.4, 2 / 1.4)
        assert report.second_branch
        assert not report.has_left_kink
        assert not report.admissible
        assert not validate_theorem4(train, 1.5, 2.0).exponents_admissible


class TestConfig:
    def test_family(self):
        block = {'alpha': 2.0, 'family': {'omega_ratio': 0.25, 'v_sharp': 10.0, 'N': 3}}
        train = train_from_config(block, Power(2))
        assert [spec.v[0] for spec in train.components] == [0.0, 20.0, 60.0]
        again = train_from_config(train_to_config(train), Power(2))
        assert again.family == train.family

    def test_components(self):
        block = {'components': [
            {'omega': 1.0, 'x0': -3.0, 'v': 0.5},
            {'omega': 0.5, 'x0': 3.0, 'v': -0.5, 'gamma': 1.0},
        ]}
        train = train_from_config(block, Power(2))
        assert train.alpha == 2.0
        again = train_from_config(train_to_config(train), Power(2))
        assert [spec.to_config() for spec in again.components] == \
            [spec.to_config() for spec in train.components]

    def test_errors(self):
        with pytest.raises(ConfigError) as err:
            train_from_config({'components': [{'x0': 1.0}]}, Power(2))
        assert err.value.path == 'train.components[0].omega'
        with pytest.raises(ConfigError) as err:
            train_from_config(
                {'family': {'omega_ratio': 2.0, 'v_sharp': 1.0}}, Power(2)
            )
        assert err.value.path == 'train.family'
        with pytest.raises(ConfigError):
            train_from_config([], Power(2))
