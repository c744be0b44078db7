r"""
Conserved quantities, distances and space-time norms

The conserved quantities of the NLS are

.. math::

    M(u) = \tfrac{1}{2}\|u\|_2^2, \quad
    E(u) = \tfrac{1}{2}\|\nabla u\|_2^2 - \int F(u)\,dx, \quad
    P(u) = \Im \int \bar{u} \nabla u\,dx

evaluated with spectral gradients and the plain-sum quadrature of
:py:class:`~.Field`. All metrics are pure functions of published snapshots.
"""
import csv
import logging
import math
from pathlib import Path
from typing import NamedTuple, Optional, Tuple, Sequence, List, Dict, Union

import numpy as np
import scipy.integrate
import scipy.stats

from ..exceptions import DomainError, InsufficientData, ParameterError, GridMismatch
from .._core import fourier
from .._core.grid import Field
from .._core.timeline import Trajectory
from .._primitives.nonlinearity import Nonlinearity


logger = logging.getLogger(__name__)

#: smallest time exponent of the ``d = 2`` pairs, keeping off the forbidden endpoint
Q1 = 2.1
#: default number of pairs of a Strichartz fan, including ``(∞, 2)``
DEFAULT_PAIRS = 5
#: format of floats in CSV output, 17 significant digits
FLOAT_FORMAT = '%.16e'


class MetricRecord(NamedTuple):
    """Metrics of one snapshot, distances only if a reference is known"""
    time: float
    mass: float
    energy: float
    momentum: Tuple[float, ...]
    sup_norm: float
    l2_dist: Optional[float] = None
    h1_dist: Optional[float] = None


def mass(field: Field) -> float:
    return 0.5 * field.l2() ** 2


def energy(field: Field, nl: Nonlinearity) -> float:
    kinetic = 0.5 * field.gradient_l2() ** 2
    return kinetic - field.integral(nl.F(np.abs(field.values)))


def momentum(field: Field) -> Tuple[float, ...]:
    conjugate = np.conj(field.values)
    return tuple(
        # the real part of the density integrates to zero on periodic boxes
        field.integral(np.imag(conjugate * du)) for du in field.gradient()
    )


def conserved(field: Field, nl: Nonlinearity, reference: Optional[Field] = None
              ) -> MetricRecord:
    """Mass, energy, momentum and sup norm of ``field``, and distances to ``reference``"""
    if reference is None:
        l2_dist = h1_dist = None
    else:
        difference = distances(field, reference)
        l2_dist, h1_dist = difference.l2, difference.h1
    return MetricRecord(
        time=field.time,
        mass=mass(field),
        energy=energy(field, nl),
        momentum=momentum(field),
        sup_norm=field.sup(),
        l2_dist=l2_dist,
        h1_dist=h1_dist,
    )


def action(field: Field, nl: Nonlinearity, omega: float) -> float:
    """The action ``E + ωM`` minimised by ground states"""
    return energy(field, nl) + omega * mass(field)


def soliton_action(field: Field, nl: Nonlinearity, omega0: float,
                   v0: Sequence[float]) -> float:
    r"""
    The action :math:`E + (\omega_0 + |v_0|^2/4)M + v_0 \cdot P` adapted to a moving soliton

    Its second derivative around the soliton with these parameters is
    coercive up to finitely many directions.
    """
    v0 = tuple(np.atleast_1d(v0))
    square_speed = sum(component ** 2 for component in v0)
    return (
        energy(field, nl)
        + (omega0 + square_speed / 4) * mass(field)
        + sum(w * p for w, p in zip(v0, momentum(field)))
    )


class Distances(NamedTuple):
    l2: float
    h1: float
    sup: float


def distances(u: Field, ref: Field) -> Distances:
    """The :math:`L^2`, :math:`H^1` and sup norms of ``u - ref``"""
    if u.grid != ref.grid:
        raise GridMismatch(u.grid, ref.grid)
    difference = u - ref
    return Distances(difference.l2(), difference.h1(), difference.sup())


def dispersive_ratio(field: Field, t: float, p: float) -> float:
    r"""
    The ratio :math:`\|e^{it\Delta}u\|_p |t|^{d(1/2 - 1/p)} / \|u\|_{p'}`

    It stays bounded in ``t`` by the dispersive estimate as long as the
    free evolution has not reached the box boundary.
    """
    if t == 0:
        raise ParameterError('the dispersive estimate requires t != 0')
    if p < 2:
        raise ParameterError('the dispersive estimate requires p >= 2, got %r' % p)
    denominator = field.lp(1.0 if math.isinf(p) else p / (p - 1))
    if denominator == 0:
        return 0.0
    propagated = field.with_values(
        fourier.apply_multiplier(field.values, np.exp(-1j * field.grid.k_squared() * t))
    )
    exponent = field.grid.d * (0.5 - (0.0 if math.isinf(p) else 1 / p))
    return propagated.lp(p) * abs(t) ** exponent / denominator


# Strichartz norms
##################
class AdmissiblePair(NamedTuple):
    r"""Exponents with :math:`2/q + d/r = d/2`, infinity as :py:data:`math.inf`"""
    q: float
    r: float

    def is_admissible(self, d: int) -> bool:
        if not (2 <= self.q <= math.inf and 2 <= self.r <= math.inf):
            return False
        if d == 2 and self.q <= Q1:
            return False
        return math.isclose(2 / self.q + d / self.r, d / 2, abs_tol=1e-12)

    def __str__(self):
        return '(%s,%s)' % tuple(
            'inf' if math.isinf(value) else '%g' % value for value in self
        )


def _largest_time_exponent(d: int) -> float:
    # 2/q at the endpoint of the pair line, the excluded q₁ for d = 2
    if d == 1:
        return 0.5
    if d == 2:
        return 2 / Q1
    return 1.0


def admissible_pairs(d: int, count: int = DEFAULT_PAIRS) -> List[AdmissiblePair]:
    """
    The anchor ``(∞, 2)`` and ``count - 1`` pairs evenly spread along the admissible line

    The pairs run up to the endpoint, which is ``(4, ∞)`` for ``d = 1``
    and ``(2, 2d/(d-2))`` for ``d ≥ 3``. For ``d = 2`` the true endpoint is
    forbidden and pairs need ``q > q₁``, so the fan stops one step short
    of ``(q₁, 2q₁/(q₁-2))``.
    """
    if d < 1:
        raise ParameterError('dimension must be at least 1, got %r' % d)
    if count < 1:
        raise ParameterError('at least one pair is required, got %r' % count)
    pairs = [AdmissiblePair(math.inf, 2.0)]
    largest = _largest_time_exponent(d)
    steps = count if d == 2 else count - 1
    for index in range(1, count):
        theta = largest * index / steps
        remainder = d / 2 - theta
        r = math.inf if remainder <= 1e-15 else d / remainder
        pairs.append(AdmissiblePair(2 / theta, r))
    assert all(pair.is_admissible(d) for pair in pairs), 'pairs must be admissible'
    return pairs


def _space_norms(trajectory: Trajectory, r: float, gradient: bool) -> np.ndarray:
    norms = []
    for field in trajectory:
        if gradient:
            magnitude = np.sqrt(sum(np.abs(du) ** 2 for du in field.gradient()))
            field = field.with_values(magnitude)
        norms.append(field.lp(r))
    return np.array(norms)


def _time_norm(times: np.ndarray, values: np.ndarray, q: float) -> float:
    if math.isinf(q):
        return float(np.max(values))
    if len(times) < 2:
        return 0.0
    return float(scipy.integrate.trapezoid(values ** q, times)) ** (1 / q)


def _uniform_times(trajectory: Trajectory) -> np.ndarray:
    if not len(trajectory):
        raise InsufficientData(1, 0)
    times = trajectory.times()
    steps = np.diff(times)
    if len(steps) and not np.allclose(steps, steps[0], rtol=1e-6, atol=0):
        raise ParameterError('space-time norms require uniformly spaced snapshots')
    return times


def mixed_norms(trajectory: Trajectory, pairs: Sequence[AdmissiblePair],
                gradient: bool = False) -> Dict[AdmissiblePair, float]:
    r"""The discrete :math:`L^q_t L^r_x` norm of the trajectory for every pair"""
    times = _uniform_times(trajectory)
    space_norms = {}  # type: Dict[float, np.ndarray]
    result = {}
    for pair in pairs:
        if pair.r not in space_norms:
            space_norms[pair.r] = _space_norms(trajectory, pair.r, gradient)
        result[pair] = _time_norm(times, space_norms[pair.r], pair.q)
    return result


def strichartz_norm(trajectory: Trajectory, d: Optional[int] = None,
                    pairs: Optional[Sequence[AdmissiblePair]] = None,
                    gradient: bool = False) -> float:
    r"""
    Lower bound of the Strichartz norm of ``trajectory`` over its time window

    :param trajectory: uniformly spaced snapshots, usually of a difference
    :param d: the dimension, by default the one of the snapshots
    :param pairs: the admissible pairs to consider, by default
                  :py:func:`~.admissible_pairs` of ``d``
    :param gradient: measure :math:`\nabla u` instead of :math:`u`

    The supremum over all admissible pairs is replaced by the maximum over
    the finite set ``pairs``, which never exceeds the true norm.
    """
    if pairs is None:
        d = trajectory.initial.grid.d if d is None else d
        pairs = admissible_pairs(d)
    if not pairs:
        raise ParameterError('the Strichartz norm needs at least one admissible pair')
    return max(mixed_norms(trajectory, pairs, gradient).values())


# Rate fits
###########
class ExponentialFit(NamedTuple):
    """Fit of ``log(values) ≈ intercept - rate * times``"""
    rate: float
    intercept: float
    r_squared: float

    def __call__(self, t):
        return np.exp(self.intercept - self.rate * np.asarray(t))


def fit_exponential_rate(times: Sequence[float], values: Sequence[float]
                         ) -> ExponentialFit:
    """
    Least squares fit of an exponential to positive ``values``

    :raises InsufficientData: for fewer than three points
    :raises DomainError: if any value is not positive
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size != values.size:
        raise ParameterError('times and values differ in length')
    if times.size < 3:
        raise InsufficientData(3, times.size)
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise DomainError('exponential fits require positive values')
    logarithms = np.log(values)
    if np.ptp(logarithms) == 0:
        return ExponentialFit(0.0, float(logarithms[0]), 1.0)
    regression = scipy.stats.linregress(times, logarithms)
    return ExponentialFit(
        rate=-float(regression.slope),
        intercept=float(regression.intercept),
        r_squared=float(regression.rvalue ** 2),
    )


# CSV output
############
def format_value(value: Union[float, int, None]) -> str:
    """Format a CSV cell, empty for missing values"""
    if value is None:
        return ''
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(value)
    return FLOAT_FORMAT % value


def _cumulative_norms(times: np.ndarray, space_norms: np.ndarray, q: float):
    if math.isinf(q):
        return np.maximum.accumulate(space_norms)
    integrals = scipy.integrate.cumulative_trapezoid(space_norms ** q, times, initial=0)
    return integrals ** (1 / q)


def write_metrics_csv(path: Union[str, Path], trajectory: Trajectory,
                      pairs: Sequence[AdmissiblePair] = (),
                      difference: Optional[Trajectory] = None) -> Path:
    r"""
    Write the metric records of ``trajectory`` as CSV

    Columns are ``t, mass, energy, px[, py], l2_dist, h1_dist, sup`` and
    one column per pair with the :math:`L^q_tL^r_x` norm of ``difference``
    over the window up to each row, if given.
    """
    path = Path(path)
    times, records = trajectory.records.times(), trajectory.records.values()
    if not records:
        raise InsufficientData(1, 0)
    d = len(records[0].momentum)
    header = ['t', 'mass', 'energy'] + ['px', 'py'][:d] + ['l2_dist', 'h1_dist', 'sup']
    columns = []
    if difference is not None and pairs:
        _uniform_times(difference)
        if len(difference) != len(records):
            raise ParameterError('the difference needs one snapshot per record')
        for pair in pairs:
            header.append('S%s' % (pair,))
            columns.append(_cumulative_norms(
                times, _space_norms(difference, pair.r, False), pair.q
            ))
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='', encoding='utf-8') as stream:
        writer = csv.writer(stream)
        writer.writerow(header)
        for index, record in enumerate(records):
            writer.writerow(
                [format_value(value) for value in (
                    record.time, record.mass, record.energy, *record.momentum,
                    record.l2_dist, record.h1_dist, record.sup_norm,
                )]
                + [format_value(column[index]) for column in columns]
            )
    logger.info('wrote %d metric records to %s', len(records), path)
    return path
