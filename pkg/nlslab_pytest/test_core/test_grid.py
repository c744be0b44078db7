import pytest
import numpy as np

from nlslab import Grid, Field, RadialGrid
from nlslab.exceptions import ParameterError, GridMismatch

from ..utility import assertion_mode, line


class TestGrid:
    def test_axes(self):
        grid = line(8.0, 8)
        assert grid.d == 1
        assert grid.shape == (8,)
        assert grid.spacing == (1.0,)
        assert np.allclose(grid.axes()[0], np.arange(-4.0, 4.0))
        # the origin is always a sample
        assert 0.0 in grid.axes()[0]

    def test_plane(self):
        grid = Grid((10.0, 20.0), (16, 32))
        assert grid.d == 2
        assert grid.size == 16 * 32
        assert grid.cell_volume == pytest.approx(10 / 16 * 20 / 32)
        x, y = grid.coordinates()
        assert x.shape == y.shape == (16, 32)
        assert grid.k_squared().shape == (16, 32)

    def test_invalid(self):
        with pytest.raises(ParameterError):
            Grid((10.0,), (100,))
        with pytest.raises(ParameterError):
            Grid((-1.0,), (64,))
        with pytest.raises(ParameterError):
            Grid((1.0, 1.0, 1.0), (8, 8, 8))
        with pytest.raises(ParameterError):
            Grid((1.0, 1.0), (8,))

    def test_equality(self):
        assert line(10.0, 64) == line(10.0, 64)
        assert line(10.0, 64) != line(10.0, 128)
        assert len({line(10.0, 64), line(10.0, 64)}) == 1

    def test_wavenumbers(self):
        grid = line(2 * np.pi, 16)
        k, = grid.wavenumbers()
        assert set(np.round(np.abs(k)).astype(int)) == set(range(9))


class TestField:
    def test_norms_gaussian(self):
        grid = line(40.0, 1024)
        x, = grid.coordinates()
        field = Field(grid, np.exp(-x ** 2 / 2))
        assert field.l2() ** 2 == pytest.approx(np.sqrt(np.pi), rel=1e-12)
        # |∇e^{-x²/2}|² integrates to √π/2
        assert field.gradient_l2() ** 2 == pytest.approx(np.sqrt(np.pi) / 2, rel=1e-10)
        assert field.h1() ** 2 == pytest.approx(1.5 * np.sqrt(np.pi), rel=1e-10)
        assert field.sup() == pytest.approx(1.0)
        assert field.lp(np.inf) == field.sup()
        assert field.lp(2) == pytest.approx(field.l2())
        assert field.boundary_ratio() < 1e-80

    def test_laplacian(self):
        grid = line(2 * np.pi, 64)
        x, = grid.coordinates()
        field = Field(grid, np.sin(3 * x))
        assert np.allclose(field.laplacian(), -9 * np.sin(3 * x), atol=1e-10)
        gradient, = field.gradient()
        assert np.allclose(gradient, 3 * np.cos(3 * x), atol=1e-10)

    def test_arithmetic(self):
        grid = line(10.0, 64)
        one = Field(grid, np.ones(grid.shape), time=2.0)
        two = one + one
        assert np.all(two.values == 2)
        assert two.time == 2.0
        assert np.all((two - one).values == 1)
        assert np.all((3 * one).values == 3)
        assert np.all((-one).values == -1)
        assert one.at_time(5.0).time == 5.0

    def test_grid_mismatch(self):
        with pytest.raises(GridMismatch):
            line(10.0, 64).zeros() + line(10.0, 128).zeros()

    @assertion_mode
    def test_finite(self):
        grid = line(10.0, 64)
        with pytest.raises(AssertionError):
            Field(grid, np.full(grid.shape, np.nan))

    def test_zero(self):
        field = line(10.0, 64).zeros()
        assert field.l2() == 0
        assert field.boundary_ratio() == 0.0


class TestRadialGrid:
    def test_covering(self):
        grid = Grid((30.0, 40.0), (64, 64))
        radial = RadialGrid.covering(grid)
        assert radial.r_max == pytest.approx(25.0)
        assert radial.spacing <= min(grid.spacing)
        assert radial.radii()[0] == 0.0

    def test_invalid(self):
        with pytest.raises(ParameterError):
            RadialGrid(0.0, 64)
        with pytest.raises(ParameterError):
            RadialGrid(10.0, 8)
