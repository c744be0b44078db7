r"""
Evolution around a background of exact solutions

A :py:class:`BackgroundW` superposes moving solitons and kinks,
:math:`W = \sum_j W_j`, each of which solves the NLS exactly. The
perturbation :math:`\eta = u - W` then obeys

.. math::

    i\partial_t \eta + \Delta \eta + f(W + \eta) - f(W) + H = 0,
    \qquad H = f(W) - \sum_j f(W_j)

Only :math:`\eta` is ever transformed spectrally; :math:`W`, its time
derivative and its Laplacian are evaluated analytically. This keeps kink
backgrounds, which do not vanish at infinity, off the periodic transforms.
"""
import logging
from typing import Sequence, Optional, NamedTuple, List, Tuple

import numpy as np

from ..exceptions import (
    ParameterError, BoundaryContamination, InsufficientData, NumericalBlowup,
)
from .._core import fourier
from .._core.grid import Grid, Field
from .._core.timeline import Trajectory
from .._primitives.nonlinearity import Nonlinearity
from .._primitives.waves import WaveSpec, boost, boost_jet
from .._basics.trains import TrainSpec
from .evolution import EvolutionConfig, Stepper, free_propagator


logger = logging.getLogger(__name__)

#: relative boundary magnitude above which a perturbation is contaminated
CONTAMINATION_LIMIT = 1e-6
#: relative boundary magnitude required of initial perturbations
INITIAL_BOUNDARY_LIMIT = 1e-8


class BackgroundW:
    r"""
    Analytic sum of exact moving solutions

    :param components: the moving solitons and kinks
    :param nl: the nonlinearity they solve, by default the one of their profiles
    :param train: the train the components stem from, if any

    Components are evaluated on demand at any time; nothing is stored
    on a grid.
    """
    __slots__ = ('components', 'nl', 'train', 'metadata')

    def __init__(self, components: Sequence[WaveSpec],
                 nl: Optional[Nonlinearity] = None,
                 train: Optional[TrainSpec] = None):
        components = tuple(components)
        if not components:
            raise ParameterError('a background needs at least one component')
        if nl is None:
            candidates = {
                spec.profile.nonlinearity for spec in components
                if spec.profile.nonlinearity is not None
            }
            if len(candidates) != 1:
                raise ParameterError(
                    'cannot infer a single nonlinearity from %r' % (candidates,)
                )
            nl = candidates.pop()
        self.components = components
        self.nl = nl
        self.train = train
        self.metadata = {} if train is None else dict(train.metadata)

    @classmethod
    def from_train(cls, train: TrainSpec, nl: Optional[Nonlinearity] = None
                   ) -> 'BackgroundW':
        """The background of all components of a finite ``train``, kinks included"""
        if train.infinite:
            raise ParameterError('infinite trains must be truncated first')
        return cls(train.waves(), nl, train)

    @property
    def d(self) -> int:
        return self.components[0].d

    def parts(self, t: float, grid: Grid) -> List[np.ndarray]:
        """The individual components :math:`W_j(t)` on ``grid``"""
        coordinates = grid.coordinates()
        return [boost(spec, t, coordinates) for spec in self.components]

    def __call__(self, t: float, grid: Grid) -> np.ndarray:
        return sum(self.parts(t, grid))

    def evaluate(self, t: float, grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
        r"""Both :math:`W(t)` and :math:`\sum_j f(W_j(t))` on ``grid``"""
        parts = self.parts(t, grid)
        return sum(parts), sum(self.nl.f(part) for part in parts)

    def jet(self, t: float, grid: Grid) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        r""":math:`W`, :math:`\partial_t W` and :math:`\Delta W` at time ``t``"""
        coordinates = grid.coordinates()
        jets = [boost_jet(spec, t, coordinates) for spec in self.components]
        return tuple(sum(jet[index] for jet in jets) for index in range(3))

    def field(self, t: float, grid: Grid) -> Field:
        return Field(grid, self(t, grid), t)

    def __repr__(self):
        return '<%s of %d components for %r>' % (
            self.__class__.__name__, len(self.components), self.nl
        )


def source_H(W: BackgroundW, t: float, grid: Grid) -> Field:
    r"""The source :math:`H(t) = f(W(t)) - \sum_j f(W_j(t))` on ``grid``"""
    total, interactions = W.evaluate(t, grid)
    return Field(grid, W.nl.f(total) - interactions, t)


def background_residual(W: BackgroundW, t: float, grid: Grid) -> float:
    r"""
    :math:`L^2` norm of :math:`iW_t + \Delta W + \sum_j f(W_j)` at time ``t``

    All derivatives are analytic, so this measures how exactly the
    individual components solve the NLS, independent of the grid.
    """
    coordinates = grid.coordinates()
    residual = np.zeros(grid.shape, dtype=complex)
    for spec in W.components:
        value, time_derivative, laplacian = boost_jet(spec, t, coordinates)
        residual += 1j * time_derivative + laplacian + W.nl.f(value)
    return Field(grid, residual, t).l2()


# Perturbation evolution
########################
class PerturbationRecord(NamedTuple):
    """Norms of the perturbation at one snapshot"""
    time: float
    l2: float
    h1: float
    gradient_l2: float
    sup_norm: float
    boundary_ratio: float


def perturbation_record(eta: Field) -> PerturbationRecord:
    return PerturbationRecord(
        time=eta.time,
        l2=eta.l2(),
        h1=eta.h1(),
        gradient_l2=eta.gradient_l2(),
        sup_norm=eta.sup(),
        boundary_ratio=eta.boundary_ratio(),
    )


def _remainder(W: BackgroundW, grid: Grid):
    r"""Right hand side :math:`i(f(W+\eta) - \sum_j f(W_j))` of the non-stiff substep"""
    f = W.nl.f

    def rate(t: float, eta: np.ndarray) -> np.ndarray:
        total, interactions = W.evaluate(t, grid)
        return 1j * (f(total + eta) - interactions)
    return rate


def _perturbation_step(W: BackgroundW, grid: Grid):
    rate = _remainder(W, grid)

    def advance(eta: np.ndarray, t: float, dt: float) -> np.ndarray:
        half = free_propagator(grid, dt / 2)
        with np.errstate(over='ignore', invalid='ignore'):
            eta = fourier.apply_multiplier(eta, half)
            midpoint = eta + dt / 2 * rate(t, eta)
            eta = eta + dt * rate(t + dt / 2, midpoint)
            return fourier.apply_multiplier(eta, half)
    return advance


def evolve_perturbation(eta0: Field, W: BackgroundW, nl: Nonlinearity,
                        cfg: EvolutionConfig) -> Trajectory:
    r"""
    Evolve the perturbation :math:`\eta` of the background ``W``

    :param eta0: the initial perturbation, decaying at the box boundary
    :param W: the background of exact solutions of ``nl``
    :param cfg: evolution parameters, ``dt`` may be negative
    :return: the trajectory of :math:`\eta` with a
             :py:class:`~.PerturbationRecord` per snapshot
    :raises BoundaryContamination: if :math:`\eta` reaches the box boundary
    :raises NumericalBlowup: if :math:`\eta` stops being finite

    Every step applies half a free step to :math:`\eta`, the midpoint
    rule for :math:`\partial_t\eta = i(f(W+\eta) - \sum_j f(W_j))` with
    the analytic background, and another half free step.
    """
    if W.nl != nl:
        raise ParameterError('background solves %r, not %r' % (W.nl, nl))
    if eta0.grid.d != W.d:
        raise ParameterError('perturbation in d=%d for a background in d=%d' % (
            eta0.grid.d, W.d
        ))
    if eta0.boundary_ratio() > INITIAL_BOUNDARY_LIMIT:
        raise ParameterError(
            'initial perturbation does not decay at the boundary: ratio %.3e' %
            eta0.boundary_ratio()
        )
    trajectory = Trajectory({
        'scheme': 'perturbation', 'dt': cfg.dt, 'nonlinearity': nl.to_config(),
        'components': len(W.components),
    })
    trajectory.metadata.update(W.metadata)

    def publish(eta: Field):
        record = perturbation_record(eta)
        if record.boundary_ratio > CONTAMINATION_LIMIT:
            raise BoundaryContamination(eta.time, record.boundary_ratio)
        trajectory.publish(eta, record)

    stepper = Stepper(
        eta0, _perturbation_step(W, eta0.grid),
        threshold=cfg.blowup_threshold,
    )
    try:
        stepper.run(cfg, publish)
    except (NumericalBlowup, BoundaryContamination) as err:
        logger.warning('perturbation evolution stopped: %s', err)
        raise
    return trajectory


def reconstruct(eta_trajectory: Trajectory, W: BackgroundW) -> Trajectory:
    r"""The solution :math:`u = W + \eta` for every snapshot of :math:`\eta`"""
    return eta_trajectory.map(
        lambda eta: eta.with_values(eta.values + W(eta.time, eta.grid))
    )


def nls_residual(u_trajectory: Trajectory, nl: Nonlinearity,
                 background: Optional[BackgroundW] = None
                 ) -> Tuple[np.ndarray, np.ndarray]:
    r"""
    :math:`L^2` norm of :math:`i\partial_t u + \Delta u + f(u)` at interior snapshots

    :param u_trajectory: snapshots of :math:`u`, or of :math:`\eta` if a
                         ``background`` is given
    :param background: a background :math:`W` with :math:`u = W + \eta`,
                       whose derivatives are then taken analytically
    :return: the interior times and residual norms

    Time derivatives of snapshots are taken by centered differences,
    Laplacians spectrally.
    """
    fields = u_trajectory.fields()
    if len(fields) < 3:
        raise InsufficientData(3, len(fields))
    times, residuals = [], []
    for before, current, after in zip(fields, fields[1:], fields[2:]):
        time_derivative = (after.values - before.values) / (after.time - before.time)
        laplacian = current.laplacian()
        values = current.values
        if background is not None:
            w, w_t, w_laplacian = background.jet(current.time, current.grid)
            values = values + w
            time_derivative = time_derivative + w_t
            laplacian = laplacian + w_laplacian
        residual = 1j * time_derivative + laplacian + nl.f(values)
        times.append(current.time)
        residuals.append(current.with_values(residual).l2())
    return np.array(times), np.array(residuals)


def eta_norm_series(trajectory: Trajectory, name: str = 'h1'
                    ) -> Tuple[np.ndarray, np.ndarray]:
    """Times and values of a recorded perturbation norm"""
    return trajectory.series(name)


def separation_profile(trajectories: Sequence[Trajectory], name: str = 'h1'
                       ) -> List[float]:
    """The largest recorded norm of every trajectory, e.g. for increasing start times"""
    return [float(np.max(trajectory.series(name)[1])) for trajectory in trajectories]
