import pytest
import numpy as np

from nlslab import Field, Power, DoublePower, WaveSpec, TrainSpec, TrainFamily,\
    Trajectory, EvolutionConfig, BackgroundW, kink, source_H, background_residual,\
    evolve
from nlslab._basics.trains import generate_train_params
from nlslab._schemes.perturbation import (
    evolve_perturbation, reconstruct, nls_residual, separation_profile,
    eta_norm_series,
)
from nlslab.exceptions import ParameterError, BoundaryContamination, InsufficientData

from ..utility import line, soliton, soliton_train


def colliding_background():
    return BackgroundW.from_train(
        soliton_train(soliton(x0=-3.0, v=-2.0), soliton(x0=3.0, v=2.0))
    )


class TestBackground:
    def test_nonlinearity(self):
        background = colliding_background()
        assert background.nl == Power(2)
        assert background.d == 1
        with pytest.raises(ParameterError):
            BackgroundW(())

    def test_infinite(self):
        train = generate_train_params(TrainFamily(0.25, 1.0, 10.0), 2.0, 1)
        with pytest.raises(ParameterError):
            BackgroundW.from_train(train)

    def test_residual(self):
        grid = line(40.0, 512)
        for t in (0.0, 0.5, 1.0):
            assert background_residual(colliding_background(), t, grid) < 1e-10

    def test_kink_residual(self):
        nl = DoublePower(1, 2)
        background = BackgroundW([WaveSpec(kink(nl), v=0.5)])
        assert background_residual(background, 1.0, line(200.0, 2048)) < 1e-10

    def test_source(self):
        grid = line(40.0, 512)
        single = BackgroundW([soliton()])
        assert source_H(single, 0.0, grid).l2() == 0.0
        assert source_H(colliding_background(), 0.0, grid).l2() > 0.0


class TestPerturbation:
    def test_resting_kink(self):
        nl = DoublePower(1, 2)
        train = TrainSpec(left_kink=WaveSpec(kink(nl)), alpha=nl.alpha)
        trajectory = evolve_perturbation(
            line(200.0, 1024).zeros(), BackgroundW.from_train(train, nl), nl,
            EvolutionConfig(0.01, 1.0, snapshot_stride=10),
        )
        _, norms = eta_norm_series(trajectory, 'l2')
        assert len(norms) == 11
        assert np.max(norms) == 0.0

    def test_interaction_grows(self):
        background = colliding_background()
        trajectory = evolve_perturbation(
            line(40.0, 512).zeros(), background, Power(2),
            EvolutionConfig(0.005, 0.5, snapshot_stride=10),
        )
        _, norms = eta_norm_series(trajectory, 'h1')
        assert norms[0] == 0.0
        assert norms[-1] > 0.0
        assert trajectory.metadata['components'] == 2
        assert separation_profile([trajectory]) == [float(np.max(norms))]

    def test_nls_residual(self):
        background = colliding_background()
        grid = line(40.0, 512)
        trajectory = evolve_perturbation(
            grid.zeros(), background, Power(2),
            EvolutionConfig(0.001, 0.05, snapshot_stride=1),
        )
        _, residuals = nls_residual(trajectory, Power(2), background)
        assert np.max(residuals) < 1e-3
        solution = reconstruct(trajectory, background)
        assert np.allclose(
            solution.initial.values, background(0.0, grid), atol=1e-14,
        )
        with pytest.raises(InsufficientData):
            nls_residual(Trajectory(), Power(2))

    @pytest.mark.slow
    @pytest.mark.parametrize('train', [
        soliton_train(soliton(v=1.0)),
        soliton_train(soliton(x0=-10.0, v=0.5), soliton(x0=10.0, v=-0.5)),
    ], ids=['soliton', 'two_solitons'])
    def test_formulation_equivalence(self, train):
        # both schemes are second order, their difference is 1.7e-7 at dt=2.5e-4
        grid = line(80.0, 1024)
        x = grid.coordinates()[0]
        eta0 = Field(grid, 1e-3 * np.exp(-(x - 2.0) ** 2) + 0j)
        background = BackgroundW.from_train(train)
        cfg = EvolutionConfig(1e-4, 2.0, snapshot_stride=2000, observe=False)
        split = reconstruct(
            evolve_perturbation(eta0, background, Power(2), cfg), background
        )
        full = evolve(
            Field(grid, background(0.0, grid) + eta0.values), Power(2), cfg
        )
        differences = [(u - full.at(u.time)).l2() for u in split]
        assert len(differences) == 11
        assert max(differences) < 1e-7

    def test_boundary_contamination(self):
        grid = line(40.0, 512)
        x, = grid.coordinates()
        # group velocity 40 reaches the boundary well before t = 1
        eta0 = Field(grid, 1e-3 * np.exp(-x ** 2 + 20j * x))
        with pytest.raises(BoundaryContamination):
            evolve_perturbation(
                eta0, BackgroundW([soliton()]), Power(2), EvolutionConfig(0.005, 1.0),
            )

    def test_invalid(self):
        grid = line(40.0, 512)
        background = BackgroundW([soliton()])
        with pytest.raises(ParameterError):
            evolve_perturbation(grid.zeros(), background, Power(3), EvolutionConfig(0.1, 1.0))
        with pytest.raises(ParameterError):
            evolve_perturbation(
                Field(grid, np.ones(grid.shape)), background, Power(2),
                EvolutionConfig(0.1, 1.0),
            )
