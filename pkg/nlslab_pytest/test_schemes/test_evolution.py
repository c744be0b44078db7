import math

import pytest
import numpy as np

from nlslab import Field, Power, EvolutionConfig, free_propagate, step_strang,\
    evolve, sum_profile
from nlslab._schemes.evolution import (
    time_reversal_error, backward_scheme, dealias_mask, nonlinear_phase,
)
from nlslab.exceptions import ParameterError, ConfigError, NumericalBlowup

from ..utility import line, soliton, soliton_train, relative_drift


class TestConfig:
    def test_schedule(self):
        full, remainder = EvolutionConfig(0.3, 1.0).schedule(0.0)
        assert full == 3
        assert remainder == pytest.approx(0.1)
        assert EvolutionConfig(0.25, 1.0).schedule(0.0) == (4, 0.0)
        assert EvolutionConfig(-0.5, 0.0).schedule(2.0) == (4, 0.0)
        assert EvolutionConfig(0.1, 1.0).schedule(1.0) == (0, 0.0)

    def test_wrong_direction(self):
        with pytest.raises(ParameterError):
            EvolutionConfig(0.1, 0.0).schedule(1.0)

    def test_invalid(self):
        with pytest.raises(ParameterError):
            EvolutionConfig(0.0, 1.0)
        with pytest.raises(ParameterError):
            EvolutionConfig(math.nan, 1.0)
        with pytest.raises(ParameterError):
            EvolutionConfig(0.1, 1.0, snapshot_stride=0)

    def test_config_block(self):
        cfg = EvolutionConfig.from_config({'dt': 0.01, 't_end': 2, 'snapshot_stride': 5})
        assert cfg.to_config() == {
            'dt': 0.01, 't_end': 2.0, 'dealias': False, 'snapshot_stride': 5,
        }
        with pytest.raises(ConfigError) as err:
            EvolutionConfig.from_config({'t_end': 1.0})
        assert err.value.path == 'evolution.dt'
        with pytest.raises(ConfigError):
            EvolutionConfig.from_config({'dt': 0, 't_end': 1.0})


class TestFreeEvolution:
    @pytest.mark.parametrize('t', [0.5, 1.0, 2.0, 3.0])
    def test_gaussian(self, t):
        grid = line(60.0, 2048)
        x, = grid.coordinates()
        field = Field(grid, np.exp(-x ** 2))
        # |e^{itΔ}e^{-x²}| peaks at (1 + 16t²)^{-1/4}
        assert free_propagate(field, t).sup() == pytest.approx(
            (1 + 16 * t ** 2) ** -0.25, abs=1e-8
        )

    def test_unitary(self):
        grid = line(60.0, 1024)
        rng = np.random.default_rng(1)
        field = Field(grid, rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape))
        propagated = free_propagate(field, 0.7)
        assert propagated.time == 0.7
        assert propagated.l2() == pytest.approx(field.l2(), rel=1e-13)
        assert free_propagate(field, 0.0) is field

    def test_dealias_mask(self):
        grid = line(2 * math.pi, 64)
        mask = dealias_mask(grid)
        assert mask.sum() == 2 * 21 + 1


class TestStrang:
    def test_step(self):
        grid = line(60.0, 1024)
        field = sum_profile(soliton_train(soliton()), 0.0, grid)
        stepped = step_strang(field, 0.01, Power(2))
        assert stepped.time == 0.01
        assert stepped.l2() == pytest.approx(field.l2(), rel=1e-13)
        assert nonlinear_phase(field.values, Power(2), 0.01) == pytest.approx(0.02)

    def test_soliton_propagation(self):
        grid = line(60.0, 1024)
        train = soliton_train(soliton(v=2.0, x0=-5.0))
        cfg = EvolutionConfig(
            0.005, 2.0, snapshot_stride=40,
            reference=lambda t: sum_profile(train, t, grid),
        )
        trajectory = evolve(sum_profile(train, 0.0, grid), Power(2), cfg)
        assert list(trajectory.times()) == pytest.approx(
            [0.2 * index for index in range(11)]
        )
        assert trajectory.final.time == 2.0
        _, masses = trajectory.series('mass')
        _, energies = trajectory.series('energy')
        _, errors = trajectory.series('h1_dist')
        assert relative_drift(masses) < 1e-12
        assert relative_drift(energies) < 1e-4
        assert errors[-1] < 1e-3
        assert trajectory.metadata['scheme'] == 'strang'

    def test_snapshot_stride(self):
        grid = line(60.0, 256)
        field = sum_profile(soliton_train(soliton()), 0.0, grid)
        trajectory = evolve(field, Power(2), EvolutionConfig(
            0.1, 1.0, snapshot_stride=3, observe=False,
        ))
        assert trajectory.times() == pytest.approx([0.0, 0.3, 0.6, 0.9, 1.0])
        assert not trajectory.records

    def test_blowup(self):
        grid = line(60.0, 256)
        field = sum_profile(soliton_train(soliton()), 0.0, grid)
        with pytest.raises(NumericalBlowup) as err:
            evolve(field, Power(2), EvolutionConfig(0.1, 1.0, blowup_threshold=1.0))
        assert err.value.last_good == 0.0

    @pytest.mark.parametrize('v, dt', [(0.0, 0.02), (4.0, 0.02), (4.0, 0.01)])
    def test_second_order(self, v, dt):
        grid = line(60.0, 1024)
        train = soliton_train(soliton(v=v, x0=-2.0))
        exact = sum_profile(train, 1.0, grid)
        errors = []
        for step in (dt, dt / 2, dt / 4):
            final = evolve(
                sum_profile(train, 0.0, grid), Power(2),
                EvolutionConfig(step, 1.0, observe=False, snapshot_stride=10 ** 9),
            ).final
            errors.append((final - exact).l2())
        ratios = [coarse / fine for coarse, fine in zip(errors, errors[1:])]
        assert all(3.5 <= ratio <= 4.5 for ratio in ratios), ratios

    def test_time_reversal(self):
        grid = line(60.0, 1024)
        field = sum_profile(soliton_train(soliton(v=4.0, x0=-4.0)), 0.0, grid)
        assert time_reversal_error(field, Power(2), EvolutionConfig(0.01, 1.0)) < 1e-10


class TestBackwardScheme:
    def test_invalid(self):
        train = soliton_train(soliton(x0=-3.0, v=-0.5), soliton(x0=3.0, v=0.5))
        cfg = EvolutionConfig(0.01, 0.0)
        with pytest.raises(ParameterError):
            backward_scheme(train, Power(2), [3.0, 2.0], 0.0, cfg, line())
        with pytest.raises(ParameterError):
            backward_scheme(train, Power(2), [2.0, 3.0], 2.0, cfg, line())
        colliding = soliton_train(soliton(x0=-3.0), soliton(x0=3.0))
        with pytest.raises(ParameterError):
            backward_scheme(colliding, Power(2), [2.0], 0.0, cfg, line())

    @pytest.mark.slow
    def test_runs(self):
        train = soliton_train(soliton(x0=-3.0, v=-1.0), soliton(x0=3.0, v=1.0))
        grid = line(60.0, 512)
        result = backward_scheme(
            train, Power(2), [1.0, 2.0], 0.0, EvolutionConfig(0.01, 0.0, snapshot_stride=10),
            grid, threads=2,
        )
        assert not result.failures
        assert [run.final_time for run in result.runs] == [1.0, 2.0]
        for run in result.runs:
            times, h1 = run.distance_series('h1_dist')
            assert times[0] == 0.0 and times[-1] == run.final_time
            assert h1[-1] == 0.0
            assert run.initial_data.time == 0.0
        assert len(result.cauchy_table()) == 1
