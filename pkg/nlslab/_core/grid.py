r"""
Periodic boxes and complex fields sampled on them

A :py:class:`Grid` stands in for :math:`\mathbb{R}^d` with ``d`` in 1 or 2:
each axis covers :math:`[-L/2, L/2)` with a power of two of samples.
A :py:class:`Field` is a complex grid function tagged with a time.
Both types are immutable by convention; operations always create new
instances.
"""
from typing import Sequence, Tuple, List, Union

import numpy as np

from ..exceptions import GridMismatch, ParameterError
from . import fourier


def _is_power_of_two(count: int) -> bool:
    return count > 0 and (count & (count - 1)) == 0


class Grid:
    r"""
    Uniform periodic box :math:`\prod_i [-L_i/2, L_i/2)` with :math:`N_i` samples

    :param lengths: box size per dimension
    :param counts: sample count per dimension, each a power of two

    Samples of a field are stored in row-major order, i.e. with shape
    :py:attr:`~.shape`. Derived quantities such as wavenumbers are computed
    lazily and cached per grid.

    .. code:: python3

        line = Grid.regular(100.0, 4096)
        plane = Grid((40.0, 40.0), (256, 256))
    """
    __slots__ = ('lengths', 'counts', '_cache')

    def __init__(self, lengths: Sequence[float], counts: Sequence[int]):
        lengths = tuple(float(length) for length in lengths)
        counts = tuple(int(count) for count in counts)
        if len(lengths) != len(counts) or len(lengths) not in (1, 2):
            raise ParameterError(
                'grids need 1 or 2 dimensions with matching lengths and counts,'
                ' got %r and %r' % (lengths, counts)
            )
        if not all(length > 0 for length in lengths):
            raise ParameterError('box lengths must be positive, got %r' % (lengths,))
        if not all(_is_power_of_two(count) for count in counts):
            raise ParameterError(
                'sample counts must be powers of two, got %r' % (counts,)
            )
        self.lengths = lengths  # type: Tuple[float, ...]
        self.counts = counts  # type: Tuple[int, ...]
        self._cache = {}

    @classmethod
    def regular(cls, length: float, count: int, d: int = 1) -> 'Grid':
        """Create a grid with the same ``length`` and ``count`` along ``d`` axes"""
        return cls((length,) * d, (count,) * d)

    @property
    def d(self) -> int:
        """Number of dimensions"""
        return len(self.counts)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.counts

    @property
    def size(self) -> int:
        """Total number of samples"""
        return int(np.prod(self.counts))

    @property
    def spacing(self) -> Tuple[float, ...]:
        """Sample spacing ``h = L/N`` per dimension"""
        return tuple(
            length / count for length, count in zip(self.lengths, self.counts)
        )

    @property
    def cell_volume(self) -> float:
        """Volume element ``h^d`` of the plain-sum quadrature"""
        return float(np.prod(self.spacing))

    def axes(self) -> List[np.ndarray]:
        """Sample coordinates along each axis"""
        try:
            return self._cache['axes']
        except KeyError:
            axes = self._cache['axes'] = [
                -length / 2 + np.arange(count) * (length / count)
                for length, count in zip(self.lengths, self.counts)
            ]
            return axes

    def coordinates(self) -> List[np.ndarray]:
        """Coordinate arrays of shape :py:attr:`~.shape`, one per dimension"""
        try:
            return self._cache['coordinates']
        except KeyError:
            coordinates = self._cache['coordinates'] = np.meshgrid(
                *self.axes(), indexing='ij'
            )
            return coordinates

    def wavenumbers(self) -> List[np.ndarray]:
        """Angular wavenumber arrays of shape :py:attr:`~.shape`"""
        try:
            return self._cache['wavenumbers']
        except KeyError:
            wavenumbers = self._cache['wavenumbers'] = np.meshgrid(
                *(
                    2 * np.pi * np.fft.fftfreq(count, d=length / count)
                    for length, count in zip(self.lengths, self.counts)
                ),
                indexing='ij',
            )
            return wavenumbers

    def k_squared(self) -> np.ndarray:
        """Symbol ``|k|²`` of ``-Δ``"""
        try:
            return self._cache['k_squared']
        except KeyError:
            k_squared = self._cache['k_squared'] = sum(
                k ** 2 for k in self.wavenumbers()
            )
            return k_squared

    def radii(self, center: Sequence[float] = None) -> np.ndarray:
        """Distance of every sample to ``center``"""
        center = (0.0,) * self.d if center is None else center
        return np.sqrt(sum(
            (x - c) ** 2 for x, c in zip(self.coordinates(), center)
        ))

    def zeros(self, time: float = 0.0) -> 'Field':
        return Field(self, np.zeros(self.shape, dtype=complex), time)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.lengths == other.lengths and self.counts == other.counts

    def __hash__(self):
        return hash((self.lengths, self.counts))

    def __repr__(self):
        return '%s(lengths=%r, counts=%r)' % (
            self.__class__.__name__, self.lengths, self.counts
        )


class Field:
    r"""
    Complex grid function :math:`u(t, \cdot)` on a :py:class:`Grid`

    :param grid: the box the field is sampled on
    :param values: samples, reshaped to ``grid.shape``
    :param time: the time tag of the samples

    Fields support the linear operations ``+``, ``-`` and multiplication
    by scalars; combining fields of different grids raises
    :py:exc:`~nlslab.exceptions.GridMismatch`. The resulting time tag is the
    one of the left operand.
    """
    __slots__ = ('grid', 'values', 'time')

    def __init__(self, grid: Grid, values: np.ndarray, time: float = 0.0):
        values = np.asarray(values, dtype=complex).reshape(grid.shape)
        assert np.all(np.isfinite(values)), 'field values must be finite'
        self.grid = grid
        self.values = values
        self.time = float(time)

    def with_values(self, values: np.ndarray, time: float = None) -> 'Field':
        """Create a field on the same grid with new ``values``"""
        return Field(self.grid, values, self.time if time is None else time)

    def at_time(self, time: float) -> 'Field':
        """The same samples tagged with another ``time``"""
        return Field(self.grid, self.values, time)

    def _checked(self, other: 'Field') -> np.ndarray:
        if self.grid != other.grid:
            raise GridMismatch(self.grid, other.grid)
        return other.values

    def __add__(self, other: 'Field') -> 'Field':
        if not isinstance(other, Field):
            return NotImplemented
        return self.with_values(self.values + self._checked(other))

    def __sub__(self, other: 'Field') -> 'Field':
        if not isinstance(other, Field):
            return NotImplemented
        return self.with_values(self.values - self._checked(other))

    def __mul__(self, other: Union[complex, float]) -> 'Field':
        if isinstance(other, Field):
            return NotImplemented
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __neg__(self) -> 'Field':
        return self.with_values(-self.values)

    # spectral calculus
    def gradient(self) -> List[np.ndarray]:
        """Spectral gradient, one array per dimension"""
        spectrum = fourier.forward(self.values)
        return [
            fourier.backward(1j * k * spectrum) for k in self.grid.wavenumbers()
        ]

    def laplacian(self) -> np.ndarray:
        """Spectral Laplacian"""
        return fourier.apply_multiplier(self.values, -self.grid.k_squared())

    # norms
    def integral(self, density: np.ndarray) -> float:
        """Plain-sum quadrature ``h^d Σ density`` (exact for trigonometric data)"""
        return float(np.sum(density)) * self.grid.cell_volume

    def l2(self) -> float:
        return np.sqrt(self.integral(np.abs(self.values) ** 2))

    def h1(self) -> float:
        gradient_density = sum(np.abs(du) ** 2 for du in self.gradient())
        return np.sqrt(self.integral(np.abs(self.values) ** 2 + gradient_density))

    def gradient_l2(self) -> float:
        return np.sqrt(self.integral(sum(np.abs(du) ** 2 for du in self.gradient())))

    def lp(self, p: float) -> float:
        """Discrete :math:`L^p` norm, ``p = inf`` giving the sup norm"""
        if np.isinf(p):
            return self.sup()
        return self.integral(np.abs(self.values) ** p) ** (1 / p)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def boundary_ratio(self) -> float:
        """Largest boundary magnitude relative to the peak magnitude"""
        peak = self.sup()
        if peak == 0:
            return 0.0
        magnitude = np.abs(self.values)
        edge = max(
            max(
                np.max(np.take(magnitude, 0, axis=axis)),
                np.max(np.take(magnitude, -1, axis=axis)),
            )
            for axis in range(self.grid.d)
        )
        return float(edge / peak)

    def __repr__(self):
        return '<%s on %r @ t=%s, |u|_2=%.6g>' % (
            self.__class__.__name__, self.grid, self.time, self.l2()
        )


class RadialGrid:
    r"""
    Uniform radii :math:`0 = r_0 < \dots < r_{n-1} = r_{max}` for radial profiles

    :param r_max: the largest radius
    :param count: number of radii, including ``0`` and ``r_max``
    """
    __slots__ = ('r_max', 'count')

    def __init__(self, r_max: float, count: int):
        if not r_max > 0:
            raise ParameterError('r_max must be positive, got %r' % r_max)
        if count < 16:
            raise ParameterError('radial grids need at least 16 radii, got %r' % count)
        self.r_max = float(r_max)
        self.count = int(count)

    @classmethod
    def covering(cls, grid: Grid) -> 'RadialGrid':
        """A radial grid reaching every sample of ``grid`` at the same resolution"""
        r_max = float(np.sqrt(sum((length / 2) ** 2 for length in grid.lengths)))
        spacing = min(grid.spacing)
        return cls(r_max, int(np.ceil(r_max / spacing)) + 1)

    @property
    def spacing(self) -> float:
        return self.r_max / (self.count - 1)

    def radii(self) -> np.ndarray:
        return np.linspace(0.0, self.r_max, self.count)

    def __eq__(self, other):
        if not isinstance(other, RadialGrid):
            return NotImplemented
        return self.r_max == other.r_max and self.count == other.count

    def __hash__(self):
        return hash((self.r_max, self.count))

    def __repr__(self):
        return '%s(r_max=%r, count=%r)' % (
            self.__class__.__name__, self.r_max, self.count
        )
