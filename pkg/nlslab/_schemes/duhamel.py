r"""
Fixed point iteration of the Duhamel formulation

On a window :math:`[t_0, T]` the perturbation of a background
:math:`W` solves

.. math::

    \eta(t) = -i \int_t^{T} e^{i(t-\tau)\Delta}
              \bigl(f(W + \eta) - f(W) + H\bigr)(\tau)\,d\tau

with :math:`\eta(T) = 0` standing in for the limit at infinity. The
integral is discretised by the composite trapezoid rule on a uniform
:math:`\tau`-grid and evaluated by a backward recursion, every term being
propagated with the exact free evolution.
"""
import csv
import logging
import math
from pathlib import Path
from typing import NamedTuple, Tuple, List, Optional, Union

import numpy as np

from ..exceptions import NoContraction, ParameterError, InsufficientData, DomainError
from .._core import fourier
from .._core.grid import Grid, Field
from .._core.timeline import Trajectory
from .._concurrent.basics import collect
from .._primitives.nonlinearity import Nonlinearity
from .._basics.metrics import fit_exponential_rate, format_value
from .evolution import EvolutionConfig, free_propagator
from .perturbation import BackgroundW, evolve_perturbation


logger = logging.getLogger(__name__)

#: number of consecutive expanding iterates that count as divergence
DIVERGENCE_RUN = 2


class IterateRecord(NamedTuple):
    """Diagnostics of the ``k``-th Picard iterate"""
    k: int
    #: ratio of this and the previous correction, ``None`` for the first
    ratio: Optional[float]
    #: sup over time of the :math:`L^2` norm of the correction
    correction: float
    sup_l2: float
    sup_h1: float


class PicardResult(NamedTuple):
    """Picard iterates of a perturbation on a window"""
    iterates: Tuple[Trajectory, ...]
    contraction_ratios: Tuple[float, ...]
    records: Tuple[IterateRecord, ...]
    times: np.ndarray
    #: estimate of the neglected integral beyond the horizon
    tail_bound: float
    converged: bool

    @property
    def limit(self) -> Trajectory:
        return self.iterates[-1]


class _Window(NamedTuple):
    grid: Grid
    times: np.ndarray
    backgrounds: List[np.ndarray]
    interactions: List[np.ndarray]


def _window(W: BackgroundW, grid: Grid, t0: float, T_max: float, dt: float,
            threads: Optional[int]) -> _Window:
    steps = max(1, int(math.ceil((T_max - t0) / dt - 1e-9)))
    times = t0 + (T_max - t0) * np.arange(steps + 1) / steps
    evaluations = collect(
        *((lambda time=time: W.evaluate(time, grid)) for time in times),
        threads=threads,
    )
    return _Window(
        grid, times,
        [background for background, _ in evaluations],
        [interaction for _, interaction in evaluations],
    )


def _sources(window: _Window, f, eta: Optional[List[np.ndarray]]) -> List[np.ndarray]:
    if eta is None:
        return [
            f(background) - interaction
            for background, interaction in zip(window.backgrounds, window.interactions)
        ]
    return [
        f(background + values) - interaction
        for background, interaction, values in zip(
            window.backgrounds, window.interactions, eta
        )
    ]


def _duhamel(window: _Window, sources: List[np.ndarray]) -> List[np.ndarray]:
    # I_m = U(-dτ) I_{m+1} + dτ/2 (N_m + U(-dτ) N_{m+1}), I_M = 0, η_m = -i I_m
    step = window.times[1] - window.times[0]
    backward = free_propagator(window.grid, -step)
    spectra = [fourier.forward(source) for source in sources]
    integral = np.zeros(window.grid.shape, dtype=complex)
    result = [integral]
    for index in range(len(spectra) - 2, -1, -1):
        integral = backward * (integral + step / 2 * spectra[index + 1]) \
            + step / 2 * spectra[index]
        result.append(integral)
    result.reverse()
    return [-1j * fourier.backward(spectrum) for spectrum in result]


def _sup_norm(window: _Window, values: List[np.ndarray], norm: str = 'l2') -> float:
    fields = (Field(window.grid, value, time) for value, time in zip(values, window.times))
    return max(getattr(field, norm)() for field in fields)


def _horizon_tail(window: _Window, sources: List[np.ndarray]) -> float:
    norms = np.array([
        Field(window.grid, source).l2() for source in sources
    ])
    if norms[-1] == 0:
        return 0.0
    tail = max(3, len(norms) // 4)
    try:
        fit = fit_exponential_rate(window.times[-tail:], norms[-tail:])
    except (InsufficientData, DomainError):
        return math.inf
    if fit.rate <= 0:
        return math.inf
    return float(norms[-1] / fit.rate)


def _trajectory(window: _Window, values: List[np.ndarray], **metadata) -> Trajectory:
    return Trajectory.from_fields(
        [Field(window.grid, value, time) for value, time in zip(values, window.times)],
        **metadata,
    )


def picard_iterate(W: BackgroundW, nl: Nonlinearity, t0: float, T_max: float,
                   n_iter: int, grid: Grid, dt: float, tol: float = 0.0,
                   keep_iterates: bool = True, threads: Optional[int] = None
                   ) -> PicardResult:
    r"""
    Iterate the truncated Duhamel map starting from :math:`\eta^{(0)} = 0`

    :param W: the background of exact solutions
    :param t0: the start of the window
    :param T_max: the horizon, where :math:`\eta` vanishes
    :param n_iter: the largest number of iterations
    :param grid: the box of the perturbation
    :param dt: the largest spacing of the :math:`\tau`-grid
    :param tol: stop once a correction falls below ``tol`` in
                :math:`L^\infty_t L^2_x`
    :param keep_iterates: keep all iterates instead of only the last two
    :param threads: budget for evaluating the background on the window
    :raises NoContraction: if the correction grows for
                           :py:data:`DIVERGENCE_RUN` consecutive iterates

    The contraction ratio of iterate ``k`` is
    :math:`\|\eta^{(k+1)} - \eta^{(k)}\| / \|\eta^{(k)} - \eta^{(k-1)}\|`
    in :math:`L^\infty_t L^2_x`.
    """
    if not T_max > t0:
        raise ParameterError('the horizon %r must lie after t0=%r' % (T_max, t0))
    if not dt > 0:
        raise ParameterError('tau spacing must be positive, got %r' % dt)
    if n_iter < 1:
        raise ParameterError('at least one iteration is required, got %r' % n_iter)
    if W.nl != nl:
        raise ParameterError('background solves %r, not %r' % (W.nl, nl))
    window = _window(W, grid, t0, T_max, dt, threads)
    sources = _sources(window, nl.f, None)
    tail_bound = _horizon_tail(window, sources)
    logger.info(
        'Picard window [%s, %s] with %d tau points, horizon tail %.3e',
        t0, T_max, len(window.times), tail_bound,
    )
    previous = [np.zeros(grid.shape, dtype=complex) for _ in window.times]
    iterates = [previous]
    ratios, records = [], []
    last_correction = None
    expanding = 0
    converged = False
    for k in range(1, n_iter + 1):
        current = _duhamel(window, sources if k == 1 else _sources(window, nl.f, previous))
        correction = _sup_norm(window, [a - b for a, b in zip(current, previous)])
        ratio = None
        if last_correction is not None:
            ratio = correction / last_correction if last_correction > 0 else 0.0
            ratios.append(ratio)
        records.append(IterateRecord(
            k=k, ratio=ratio, correction=correction,
            sup_l2=_sup_norm(window, current), sup_h1=_sup_norm(window, current, 'h1'),
        ))
        logger.debug('Picard iterate %d: correction %.3e, ratio %s', k, correction, ratio)
        iterates.append(current)
        if not keep_iterates:
            iterates = iterates[-2:]
        previous, last_correction = current, correction
        if correction <= tol:
            converged = True
            break
        expanding = expanding + 1 if ratio is not None and ratio > 1 else 0
        if expanding >= DIVERGENCE_RUN:
            logger.warning('Picard iteration expands: ratios %s', ratios)
            raise NoContraction(ratios, [
                _trajectory(window, values) for values in iterates
            ])
    if not converged:
        logger.warning(
            'Picard iteration did not reach tolerance %.1e in %d iterates', tol, n_iter
        )
    return PicardResult(
        iterates=tuple(
            _trajectory(window, values, tail_bound=tail_bound) for values in iterates
        ),
        contraction_ratios=tuple(ratios),
        records=tuple(records),
        times=window.times,
        tail_bound=tail_bound,
        converged=converged,
    )


class PicardConsistency(NamedTuple):
    r""":math:`L^\infty_t L^2_x` distance of the Picard limit and a backward evolution"""
    distance: float
    picard: PicardResult
    evolved: Trajectory


def picard_consistency(W: BackgroundW, nl: Nonlinearity, t0: float, T_max: float,
                       grid: Grid, dt: float, tol: float = 1e-8, n_iter: int = 50,
                       threads: Optional[int] = None) -> PicardConsistency:
    r"""
    Compare the Picard limit with :py:func:`~.evolve_perturbation` from :math:`\eta(T_{max}) = 0`

    Both use the same :math:`\tau`-grid, so the distance measures the
    discretisation difference of the two formulations.
    """
    picard = picard_iterate(
        W, nl, t0, T_max, n_iter, grid, dt, tol=tol, keep_iterates=False,
        threads=threads,
    )
    step = picard.times[1] - picard.times[0]
    evolved = evolve_perturbation(
        grid.zeros(T_max), W, nl,
        EvolutionConfig(-step, t0, snapshot_stride=1, observe=False),
    )
    distance = max(
        (field - evolved.at(field.time).at_time(field.time)).l2()
        for field in picard.limit
    )
    logger.info('Picard limit and backward evolution differ by %.3e', distance)
    return PicardConsistency(distance, picard, evolved)


def write_iterates_csv(path: Union[str, Path], result: PicardResult) -> Path:
    r"""
    Write the iterate diagnostics as CSV

    The columns are ``k, ratio, sup_l2, sup_h1, correction``, where
    ``correction`` is :math:`\|\eta^{(k)} - \eta^{(k-1)}\|_{L^\infty_t L^2_x}`,
    the numerator of ``ratio``. The first ``ratio`` is empty.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as stream:
        writer = csv.writer(stream)
        writer.writerow(['k', 'ratio', 'sup_l2', 'sup_h1', 'correction'])
        for record in result.records:
            writer.writerow([
                format_value(record.k), format_value(record.ratio),
                format_value(record.sup_l2), format_value(record.sup_h1),
                format_value(record.correction),
            ])
    logger.info('wrote %d Picard iterates to %s', len(result.records), path)
    return path
