r"""
Spectral split-step evolution of :math:`iu_t + \Delta u + f(u) = 0`

Each Strang step applies half a free step, the exact nonlinear phase
rotation :math:`u \mapsto e^{ig(|u|^2)\,dt}u` and another half free step.
Both substeps are unitary and exactly invertible, so negative time steps
integrate backward in time with the same accuracy.

The :py:class:`Stepper` drives any such substep sequence at a fixed step
size, publishing snapshots and hitting the final time exactly with a
fractional last step.
"""
import functools
import logging
import math
from typing import Callable, Optional, NamedTuple, Sequence, Tuple, List

import numpy as np
from typing_extensions import Protocol

from ..exceptions import NumericalBlowup, ParameterError, ConfigError
from .._core import fourier
from .._core.grid import Grid, Field
from .._core.timeline import Trajectory
from .._concurrent.basics import settle
from .._primitives.nonlinearity import Nonlinearity
from .._basics.metrics import conserved, distances
from .._basics.trains import TrainSpec, sum_profile, validate_theorem1


logger = logging.getLogger(__name__)

#: sup norm above which an evolution is considered blown up
BLOWUP_THRESHOLD = 1e6
#: relative tolerance for treating the last step as complete
STEP_TOLERANCE = 1e-9


class Advance(Protocol):
    """Substep sequence advancing values from time ``t`` by ``dt``"""
    def __call__(self, values: np.ndarray, t: float, dt: float) -> np.ndarray:
        ...


class EvolutionConfig:
    r"""
    Parameters of a fixed step evolution

    :param dt: signed time step, negative to integrate backward
    :param t_end: the final time, reached exactly
    :param dealias: apply the 2/3 rule after every step
    :param snapshot_stride: number of steps between snapshots
    :param observe: record :py:func:`~.conserved` metrics per snapshot
    :param reference: optional map from a time to the reference field,
                      adding distances to the metric records
    :param blowup_threshold: sup norm treated as blowup
    """
    __slots__ = (
        'dt', 't_end', 'dealias', 'snapshot_stride', 'observe', 'reference',
        'blowup_threshold',
    )

    def __init__(self, dt: float, t_end: float, dealias: bool = False,
                 snapshot_stride: int = 1, observe: bool = True,
                 reference: Optional[Callable[[float], Field]] = None,
                 blowup_threshold: float = BLOWUP_THRESHOLD):
        if dt == 0 or not math.isfinite(dt):
            raise ParameterError('time step must be finite and non-zero, got %r' % dt)
        if snapshot_stride < 1:
            raise ParameterError(
                'snapshot stride must be positive, got %r' % snapshot_stride
            )
        self.dt = float(dt)
        self.t_end = float(t_end)
        self.dealias = dealias
        self.snapshot_stride = int(snapshot_stride)
        self.observe = observe
        self.reference = reference
        self.blowup_threshold = blowup_threshold

    def replace(self, **changes) -> 'EvolutionConfig':
        parameters = {name: getattr(self, name) for name in self.__slots__}
        parameters.update(changes)
        return EvolutionConfig(**parameters)

    def schedule(self, t_start: float) -> Tuple[int, float]:
        """Number of full steps from ``t_start`` and the remaining fractional step"""
        span = self.t_end - t_start
        if span == 0:
            return 0, 0.0
        if span / self.dt <= 0:
            raise ParameterError(
                'time step %r does not lead from %r to %r' % (
                    self.dt, t_start, self.t_end
                )
            )
        full = int(math.floor(span / self.dt + STEP_TOLERANCE))
        remainder = span - full * self.dt
        if abs(remainder) <= STEP_TOLERANCE * abs(self.dt):
            remainder = 0.0
        return full, remainder

    def to_config(self) -> dict:
        return {
            'dt': self.dt, 't_end': self.t_end, 'dealias': self.dealias,
            'snapshot_stride': self.snapshot_stride,
        }

    @classmethod
    def from_config(cls, block: dict, path: str = 'evolution') -> 'EvolutionConfig':
        if not isinstance(block, dict):
            raise ConfigError(path, 'expected an object')
        try:
            dt, t_end = float(block['dt']), float(block['t_end'])
        except KeyError as err:
            raise ConfigError('%s.%s' % (path, err.args[0]), 'missing field') from None
        except (TypeError, ValueError):
            raise ConfigError(path, 'dt and t_end must be numbers') from None
        try:
            return cls(
                dt, t_end,
                dealias=bool(block.get('dealias', False)),
                snapshot_stride=int(block.get('snapshot_stride', 1)),
            )
        except ParameterError as err:
            raise ConfigError(path, str(err)) from None

    def __repr__(self):
        return '%s(dt=%r, t_end=%r, stride=%r%s)' % (
            self.__class__.__name__, self.dt, self.t_end, self.snapshot_stride,
            ', dealias' if self.dealias else '',
        )


# Substeps
##########
def free_propagator(grid: Grid, t: float) -> np.ndarray:
    """Fourier multiplier ``exp(-i|k|²t)`` of the free evolution over ``t``"""
    return np.exp(-1j * grid.k_squared() * t)


def free_propagate(field: Field, t: float) -> Field:
    r"""Apply the free Schrödinger group :math:`e^{it\Delta}` to ``field``"""
    if t == 0:
        return field
    return Field(
        field.grid,
        fourier.apply_multiplier(field.values, free_propagator(field.grid, t)),
        field.time + t,
    )


@functools.lru_cache(maxsize=8)
def dealias_mask(grid: Grid) -> np.ndarray:
    """Spectral mask of the 2/3 rule, keeping ``|k_i| ≤ 2/3 k_max`` on every axis"""
    mask = np.ones(grid.shape, dtype=bool)
    for k, length, count in zip(grid.wavenumbers(), grid.lengths, grid.counts):
        mask &= np.abs(k) <= (2 / 3) * np.pi * count / length
    return mask


def nonlinear_phase(values: np.ndarray, nl: Nonlinearity, dt: float) -> float:
    """Largest phase rotated by the nonlinear substep"""
    if not values.size:
        return 0.0
    return float(np.max(np.abs(nl.g(np.abs(values) ** 2)))) * abs(dt)


def _strang(values: np.ndarray, grid: Grid, dt: float, nl: Nonlinearity,
            dealias: bool = False) -> np.ndarray:
    half = free_propagator(grid, dt / 2)
    with np.errstate(over='ignore', invalid='ignore'):
        values = fourier.apply_multiplier(values, half)
        values = np.exp(1j * nl.g(np.abs(values) ** 2) * dt) * values
        spectrum = half * fourier.forward(values)
    if dealias:
        spectrum = spectrum * dealias_mask(grid)
    return fourier.backward(spectrum)


def _sup(values: np.ndarray) -> float:
    magnitude = np.abs(values)
    if not np.all(np.isfinite(magnitude)):
        return math.inf
    return float(np.max(magnitude)) if magnitude.size else 0.0


def step_strang(field: Field, dt: float, nl: Nonlinearity, dealias: bool = False
                ) -> Field:
    """
    Advance ``field`` by one Strang step of size ``dt``

    :raises NumericalBlowup: if the result is not finite
    """
    if nonlinear_phase(field.values, nl, dt) >= np.pi:
        logger.warning(
            'nonlinear phase %.3g exceeds pi at t=%s, dt=%s',
            nonlinear_phase(field.values, nl, dt), field.time, dt,
        )
    values = _strang(field.values, field.grid, dt, nl, dealias)
    if not math.isfinite(_sup(values)):
        raise NumericalBlowup(field.time + dt, field.time, math.inf)
    return Field(field.grid, values, field.time + dt)


# Stepping
##########
class Stepper:
    r"""
    Fixed step integrator publishing snapshots of its state

    :param field: the initial state
    :param advance: substep sequence mapping ``(values, t, dt)`` to new values
    :param threshold: sup norm treated as blowup
    :ivar time: the current time
    :ivar turn: the number of steps taken so far
    :ivar last_good: the last time with an acceptable state

    Times are computed from the start time and the number of steps taken,
    never accumulated, and the last step is shortened to land exactly on
    the final time.
    """
    __slots__ = ('grid', 'time', 'turn', 'values', 'last_good', '_advance', '_threshold')

    def __init__(self, field: Field, advance: Advance,
                 threshold: float = BLOWUP_THRESHOLD):
        self.grid = field.grid
        self.time = field.time
        self.turn = 0
        self.values = field.values
        self.last_good = field.time
        self._advance = advance
        self._threshold = threshold

    @property
    def field(self) -> Field:
        return Field(self.grid, self.values, self.time)

    def step(self, dt: float, to: Optional[float] = None):
        """Advance by ``dt``, landing on ``to`` if given"""
        target = self.time + dt if to is None else to
        values = self._advance(self.values, self.time, dt)
        sup = _sup(values)
        if not sup <= self._threshold:
            raise NumericalBlowup(target, self.last_good, sup)
        self.values = values
        self.time = target
        self.last_good = target
        self.turn += 1

    def run(self, cfg: EvolutionConfig, publish: Callable[[Field], None]):
        """Step until ``cfg.t_end``, publishing the initial, strided and final states"""
        start = self.time
        full, remainder = cfg.schedule(start)
        publish(self.field)
        for index in range(1, full + 1):
            final = index == full and not remainder
            self.step(cfg.dt, to=cfg.t_end if final else start + index * cfg.dt)
            if final or index % cfg.snapshot_stride == 0:
                publish(self.field)
        if remainder:
            self.step(remainder, to=cfg.t_end)
            publish(self.field)
        logger.debug('%r reached t=%s after %d steps', self, self.time, self.turn)

    def __repr__(self):
        return '<%s @ %s:%d on %r>' % (
            self.__class__.__name__, self.time, self.turn, self.grid
        )


def observer(trajectory: Trajectory, nl: Nonlinearity, cfg: EvolutionConfig
             ) -> Callable[[Field], None]:
    """Publish snapshots to ``trajectory`` with the metric records requested by ``cfg``"""
    warned = []

    def publish(field: Field):
        if not warned and nonlinear_phase(field.values, nl, cfg.dt) >= np.pi:
            warned.append(field.time)
            logger.warning(
                'nonlinear phase %.3g per step exceeds pi at t=%s',
                nonlinear_phase(field.values, nl, cfg.dt), field.time,
            )
        record = None
        if cfg.observe:
            reference = None if cfg.reference is None else cfg.reference(field.time)
            record = conserved(field, nl, reference)
        trajectory.publish(field, record)
    return publish


def evolve(field: Field, nl: Nonlinearity, cfg: EvolutionConfig) -> Trajectory:
    """
    Evolve ``field`` from its time tag to ``cfg.t_end`` by Strang steps

    :raises NumericalBlowup: if the sup norm exceeds ``cfg.blowup_threshold``
                             or the state stops being finite
    """
    trajectory = Trajectory({
        'scheme': 'strang', 'dt': cfg.dt, 'nonlinearity': nl.to_config(),
    })
    stepper = Stepper(
        field,
        lambda values, _, dt: _strang(values, field.grid, dt, nl, cfg.dealias),
        threshold=cfg.blowup_threshold,
    )
    try:
        stepper.run(cfg, observer(trajectory, nl, cfg))
    except NumericalBlowup as err:
        logger.warning('evolution blew up after t=%s: %s', err.last_good, err)
        raise
    return trajectory


def time_reversal_error(field: Field, nl: Nonlinearity, cfg: EvolutionConfig) -> float:
    """
    :math:`L^2` distance to ``field`` after evolving to ``cfg.t_end`` and back

    The backward pass replays the forward steps in reverse order, so the
    round trip is exact up to roundoff unless dealiasing removes modes.
    """
    full, remainder = cfg.schedule(field.time)
    steps = [cfg.dt] * full + ([remainder] if remainder else [])
    stepper = Stepper(
        field,
        lambda values, _, dt: _strang(values, field.grid, dt, nl, cfg.dealias),
        threshold=cfg.blowup_threshold,
    )
    for dt in steps:
        stepper.step(dt)
    for dt in reversed(steps):
        stepper.step(-dt)
    return distances(stepper.field.at_time(field.time), field).l2


# Backward approximation of multi-solitons
##########################################
class BackwardRun(NamedTuple):
    """One backward evolution from ``R(T_n)``, or the error it raised"""
    final_time: float
    trajectory: Optional[Trajectory]
    error: Optional[Exception]

    @property
    def failed(self) -> bool:
        return self.error is not None

    def distance_series(self, name: str = 'h1_dist') -> Tuple[np.ndarray, np.ndarray]:
        """Times and distances to the train profile, in increasing time"""
        return self.trajectory.series(name)

    @property
    def initial_data(self) -> Field:
        """The state at the earliest time of the evolution"""
        return self.trajectory.initial


class BackwardScheme(NamedTuple):
    """The backward approximations ``u_n`` of a multi-soliton on ``[T0, T_n]``"""
    T0: float
    runs: Tuple[BackwardRun, ...]

    @property
    def failures(self) -> List[Exception]:
        return [run.error for run in self.runs if run.failed]

    def initial_data(self) -> List[Field]:
        return [run.initial_data for run in self.runs if not run.failed]

    def cauchy_table(self) -> List[float]:
        r""":math:`\|u_{n+1}(T_0) - u_n(T_0)\|_{L^2}` for consecutive successful runs"""
        initial = self.initial_data()
        return [
            distances(later, earlier).l2 for earlier, later in zip(initial, initial[1:])
        ]


def backward_scheme(train: TrainSpec, nl: Nonlinearity, times: Sequence[float],
                    T0: float, cfg: EvolutionConfig, grid: Grid,
                    threads: Optional[int] = None) -> BackwardScheme:
    r"""
    Solve backward from :math:`u_n(T^n) = R(T^n)` down to ``T0`` for every final time

    :param train: a finite multi-soliton train without kinks
    :param times: increasing final times :math:`T^n`, all above ``T0``
    :param cfg: evolution parameters; only the step size magnitude,
                the stride and dealiasing are used
    :param threads: budget for running the independent evolutions

    Every run records its :math:`H^1` and :math:`L^2` distances to the
    train profile :math:`R(t)`. Blowup of one run is reported in its
    :py:class:`~.BackwardRun` without affecting the others.
    """
    times = [float(time) for time in times]
    if not times or any(later <= earlier for earlier, later in zip(times, times[1:])):
        raise ParameterError('final times must be increasing, got %r' % times)
    if not T0 < times[0]:
        raise ParameterError('T0=%r must lie below all final times' % T0)
    report = validate_theorem1(train)
    if not report.admissible:
        raise ParameterError('train is not an admissible multi-soliton: %r' % (report,))

    def reference(t: float) -> Field:
        return sum_profile(train, t, grid)

    def activity(final_time: float):
        def run():
            logger.info('backward run from T=%s to T0=%s', final_time, T0)
            return evolve(reference(final_time), nl, cfg.replace(
                dt=-abs(cfg.dt), t_end=T0, observe=True, reference=reference,
            ))
        return run

    outcomes = settle(*(activity(time) for time in times), threads=threads)
    for time, outcome in zip(times, outcomes):
        if outcome.failed:
            logger.warning('backward run from T=%s failed: %s', time, outcome.error)
    return BackwardScheme(T0, tuple(
        BackwardRun(time, outcome.value, outcome.error)
        for time, outcome in zip(times, outcomes)
    ))
