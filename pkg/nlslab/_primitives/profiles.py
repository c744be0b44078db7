r"""
Stationary profiles of the nonlinear Schrödinger equation

A profile :math:`\phi` solves the stationary equation

.. math::

    -\Delta\phi + \omega\phi - f(\phi) = 0

either as a *ground state*, positive and radial with limit :math:`0`,
or as a one-dimensional *kink* with different limits at :math:`\pm\infty`.
Profiles are sampled on uniform positions and evaluated between samples
by cubic Hermite interpolation; outside of the samples, the linearised
exponential tails take over.
"""
import enum
import functools
import logging
from pathlib import Path
from typing import NamedTuple, Optional, Tuple, Sequence, Union

import numpy as np
from scipy import integrate, optimize, special
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from ..exceptions import (
    ParameterError,
    DomainError,
    TruncationError,
    NoGroundState,
    BlowupInShooting,
    FirstIntegralNegative,
    SpeedAboveSound,
)
from .._core.grid import Grid, RadialGrid
from .._core import stencil
from .._core.codec import ProfileRecord, encode_profile, decode_profile
from .nonlinearity import (
    Nonlinearity,
    Power,
    GrossPitaevskii,
    KinkConstants,
    kink_constants,
)


logger = logging.getLogger(__name__)

#: relative boundary magnitude up to which a grid contains a profile
TRUNCATION_THRESHOLD = 1e-12
#: relative and absolute tolerance of all profile integrators
ODE_RTOL, ODE_ATOL = 1e-13, 1e-14
#: start radius of the shooting integration, avoiding the singular origin
SHOOT_START = 1e-6
#: relative width at which height bisection stops
BISECTION_WIDTH = 1e-13
#: growth factor when scanning for a shooting bracket
SCAN_FACTOR = 1.25
#: shooting aborts once the solution exceeds this multiple of its height
BLOWUP_FACTOR = 1e3
#: relative height of the matching point of outward and inward shooting
MATCH_LEVEL = 0.1
#: amplitude reduction from matching point to the start of the linear tail
TAIL_DEPTH = 1e8
#: relative distance to the limits where kinks switch to linearised tails
KINK_TAIL_SWITCH = 1e-6

ArrayLike = Union[float, np.ndarray]


class ProfileKind(enum.IntEnum):
    GROUND_STATE = 0
    KINK = 1


class ClosedForm(NamedTuple):
    """Tag and parameters of an explicit profile formula"""
    tag: str
    parameters: dict


def _sech(z):
    magnitude = np.exp(-np.abs(z))
    return 2 * magnitude / (1 + magnitude * magnitude)


def _power_sech(s, order, amplitude, kappa, power):
    z = kappa * s
    sech = _sech(z)
    value = amplitude * sech ** power
    if order == 0:
        return value
    elif order == 1:
        return -power * kappa * np.tanh(z) * value
    return kappa ** 2 * value * (power ** 2 - power * (power + 1) * sech ** 2)


def _gp_tanh(s, order, amplitude, kappa, imaginary):
    z = kappa * s
    if order == 0:
        return amplitude * np.tanh(z) + 1j * imaginary
    sech_squared = _sech(z) ** 2
    if order == 1:
        return (amplitude * kappa * sech_squared).astype(complex)
    return (-2 * amplitude * kappa ** 2 * sech_squared * np.tanh(z)).astype(complex)


_CLOSED_FORMS = {'power_sech': _power_sech, 'gp_kink': _gp_tanh}


class Profile:
    r"""
    Stationary profile sampled at uniform positions

    :param kind: whether the profile is a ground state or a kink
    :param omega: the frequency of the stationary equation
    :param d: the space dimension
    :param origin: position of the first sample
    :param spacing: distance between samples
    :param samples: the values :math:`\phi(x_i)`, real or complex
    :param slopes: optional values :math:`\phi'(x_i)`
    :param curvatures: optional values :math:`\phi''(x_i)`
    :param radial: whether positions are radii :math:`r = |x|`
    :param closed_form: optional exact formula replacing the samples
    :param limits: the limits of :math:`\phi` at :math:`-\infty` and :math:`+\infty`
    :param tail_rates: exponential approach rates to these limits
    :param decay_rate_a: estimate of the exponential decay constant
    :param intrinsic_velocity: velocity ``c`` of travelling kinks
    :param nonlinearity: the nonlinearity the profile belongs to
    :param residual: stationary residual measured at construction

    Evaluating a profile, via :py:meth:`~.__call__`, :py:meth:`~.derivative`
    or :py:meth:`~.second_derivative`, accepts coordinates for
    one-dimensional profiles and radii or coordinates for radial ones.
    Beyond the samples, tails are extrapolated; the first such evaluation
    is flagged as ``metadata['tail_evaluated']``.
    """
    __slots__ = (
        'kind', 'omega', 'd', 'origin', 'spacing', 'samples', 'slopes',
        'curvatures', 'radial', 'closed_form', 'limit_minus_inf',
        'limit_plus_inf', 'tail_rates', 'decay_rate_a', 'intrinsic_velocity',
        'nonlinearity', 'residual', 'mirrored', 'metadata', '_interpolants',
    )

    def __init__(
        self,
        kind: ProfileKind,
        omega: float,
        d: int,
        origin: float,
        spacing: float,
        samples: np.ndarray,
        slopes: Optional[np.ndarray] = None,
        curvatures: Optional[np.ndarray] = None,
        radial: bool = False,
        closed_form: Optional[ClosedForm] = None,
        limits: Tuple[complex, complex] = (0.0, 0.0),
        tail_rates: Tuple[float, float] = (np.inf, np.inf),
        decay_rate_a: float = np.nan,
        intrinsic_velocity: float = 0.0,
        nonlinearity: Optional[Nonlinearity] = None,
        residual: float = np.nan,
        metadata: Optional[dict] = None,
    ):
        samples = np.asarray(samples)
        assert samples.ndim == 1 and samples.size >= 2 * stencil.WIDTH + 1, \
            'profiles need a one-dimensional array of samples'
        assert d == 1 or radial, 'profiles in d >= 2 must be radial'
        self.kind = ProfileKind(kind)
        self.omega = float(omega)
        self.d = int(d)
        self.origin = float(origin)
        self.spacing = float(spacing)
        self.samples = samples
        self.slopes = None if slopes is None else np.asarray(slopes)
        self.curvatures = None if curvatures is None else np.asarray(curvatures)
        self.radial = radial
        self.closed_form = closed_form
        self.limit_minus_inf, self.limit_plus_inf = limits
        self.tail_rates = tuple(tail_rates)
        self.decay_rate_a = float(decay_rate_a)
        self.intrinsic_velocity = float(intrinsic_velocity)
        self.nonlinearity = nonlinearity
        self.residual = float(residual)
        self.mirrored = False
        self.metadata = dict(metadata or {})
        self._interpolants = {}

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.samples)

    def positions(self) -> np.ndarray:
        """The positions of the samples"""
        return self.origin + self.spacing * np.arange(self.samples.size)

    @property
    def support(self) -> Tuple[float, float]:
        return self.origin, self.origin + self.spacing * (self.samples.size - 1)

    # evaluation
    def __call__(self, x: ArrayLike) -> np.ndarray:
        coordinate, _ = self._stored(x)
        return self._evaluate(coordinate, 0)

    def derivative(self, x: ArrayLike) -> np.ndarray:
        coordinate, sign = self._stored(x)
        return sign * self._evaluate(coordinate, 1)

    def second_derivative(self, x: ArrayLike) -> np.ndarray:
        coordinate, _ = self._stored(x)
        return self._evaluate(coordinate, 2)

    def jet(self, displacement: Sequence[np.ndarray]):
        r"""
        Value, gradient and Laplacian at the displacements :math:`\xi = x - x_0`

        :param displacement: one coordinate array per dimension
        :return: :math:`\phi`, the list of :math:`\partial_i\phi` and :math:`\Delta\phi`

        Whenever the nonlinearity is known, the Laplacian is taken from the
        stationary equation instead of differentiating samples.
        """
        assert len(displacement) == self.d, 'displacement must have d components'
        if self.d == 1 and not self.radial:
            xi = np.asarray(displacement[0], dtype=float)
            value, slope = self(xi), self.derivative(xi)
            if self.nonlinearity is None:
                return value, [slope], self.second_derivative(xi)
            laplacian = (
                self.omega * value - self.nonlinearity.f(value)
                + 1j * self.intrinsic_velocity * slope
            )
            return value, [slope], laplacian
        radius = np.sqrt(sum(np.asarray(xi, dtype=float) ** 2 for xi in displacement))
        value = self._evaluate(radius, 0)
        radial_slope = self._evaluate(radius, 1)
        with np.errstate(invalid='ignore', divide='ignore'):
            direction = [
                np.where(radius > 0, xi / radius, 0.0) for xi in displacement
            ]
            if self.nonlinearity is not None:
                laplacian = self.omega * value - self.nonlinearity.f(value)
            else:
                laplacian = np.where(
                    radius > 0,
                    self._evaluate(radius, 2) + (self.d - 1) * radial_slope / radius,
                    self.d * self._evaluate(radius, 2),
                )
        return value, [radial_slope * component for component in direction], laplacian

    def _stored(self, x):
        x = np.asarray(x, dtype=float)
        sign = -1.0 if self.mirrored else 1.0
        coordinate = sign * x
        if self.radial:
            return np.abs(coordinate), sign * np.sign(coordinate)
        return coordinate, sign

    def _evaluate(self, s: np.ndarray, order: int) -> np.ndarray:
        if self.closed_form is not None:
            return _CLOSED_FORMS[self.closed_form.tag](
                s, order, **self.closed_form.parameters
            )
        s = np.asarray(s, dtype=float)
        low, high = self.support
        below, above = s < low, s > high
        inside = ~(below | above)
        result = np.empty(s.shape, dtype=self.samples.dtype)
        result[inside] = self._interpolant(order)(s[inside])
        if below.any() or above.any():
            if not self.metadata.get('tail_evaluated'):
                self.metadata['tail_evaluated'] = True
                logger.warning(
                    'evaluating %r outside of its samples [%s, %s]', self, low, high
                )
            result[below] = self._left_tail(s[below], order)
            result[above] = self._right_tail(s[above], order)
        return result

    def _interpolant(self, order: int):
        try:
            return self._interpolants[order]
        except KeyError:
            pass
        positions = self.positions()
        if order == 0 and self.slopes is not None:
            interpolant = CubicHermiteSpline(positions, self.samples, self.slopes)
        elif order == 1 and self.slopes is not None and self.curvatures is not None:
            interpolant = CubicHermiteSpline(positions, self.slopes, self.curvatures)
        elif order == 2 and self.curvatures is not None:
            interpolant = CubicSpline(positions, self.curvatures)
        else:
            interpolant = self._interpolant(0).derivative(order)
        self._interpolants[order] = interpolant
        return interpolant

    def _left_tail(self, s, order):
        limit, rate = self.limit_minus_inf, self.tail_rates[0]
        low, _ = self.support
        excess = (self.samples[0] - limit) * np.exp(rate * (s - low))
        return limit + excess if order == 0 else rate ** order * excess

    def _right_tail(self, s, order):
        limit, rate = self.limit_plus_inf, self.tail_rates[1]
        _, high = self.support
        algebraic = (self.d - 1) / 2 if self.radial else 0.0
        excess = (
            (self.samples[-1] - limit)
            * (high / s) ** algebraic * np.exp(-rate * (s - high))
        )
        if order == 0:
            return limit + excess
        elif order == 1:
            return -(algebraic / s + rate) * excess
        return ((algebraic / s + rate) ** 2 + algebraic / s ** 2) * excess

    def copy(self) -> 'Profile':
        duplicate = Profile.__new__(Profile)
        for slot in self.__slots__:
            setattr(duplicate, slot, getattr(self, slot))
        duplicate.metadata = dict(self.metadata)
        duplicate._interpolants = self._interpolants
        return duplicate

    def __repr__(self):
        return '<%s %s, omega=%s, d=%d, %d samples%s>' % (
            self.__class__.__name__,
            self.kind.name.lower(),
            self.omega,
            self.d,
            self.samples.size,
            '' if self.closed_form is None else ', %s' % self.closed_form.tag,
        )


def mirror_profile(profile: Profile) -> Profile:
    """
    Reflect ``profile`` as ``x → −x``

    The mirror of a kink from :py:func:`~.kink_profile` has the limits
    ``0`` at ``−∞`` and ``b`` at ``+∞``, as needed for a kink closing a
    train on the right.
    """
    if profile.radial:
        return profile
    mirrored = profile.copy()
    mirrored.mirrored = not profile.mirrored
    mirrored.limit_minus_inf = profile.limit_plus_inf
    mirrored.limit_plus_inf = profile.limit_minus_inf
    mirrored.tail_rates = profile.tail_rates[::-1]
    mirrored.intrinsic_velocity = -profile.intrinsic_velocity
    return mirrored


# Residuals
###########
def stationary_residual(profile: Profile, nl: Optional[Nonlinearity] = None) -> float:
    r"""
    Sup norm of :math:`-\Delta\phi + \omega\phi - f(\phi) + ic\phi'` over the samples

    Closed forms are differentiated analytically. Sampled profiles use
    eighth order central differences, so only the interior samples count.
    """
    nl = profile.nonlinearity if nl is None else nl
    if nl is None:
        raise ParameterError('the residual of %r requires a nonlinearity' % profile)
    positions = profile.positions()
    # the stored orientation of a mirrored profile moves backwards
    velocity = -profile.intrinsic_velocity if profile.mirrored else \
        profile.intrinsic_velocity
    if profile.closed_form is not None:
        value = profile._evaluate(positions, 0)
        slope = profile._evaluate(positions, 1)
        curvature = profile._evaluate(positions, 2)
    else:
        width = stencil.WIDTH
        value = profile.samples[width:-width]
        positions = positions[width:-width]
        slope = stencil.first_derivative(profile.samples, profile.spacing)
        curvature = stencil.second_derivative(profile.samples, profile.spacing)
    residual = (
        -curvature + profile.omega * value - nl.f(value) + 1j * velocity * slope
    )
    if profile.radial and profile.d > 1:
        residual = residual - (profile.d - 1) * slope / positions
    return float(np.max(np.abs(residual)))


def _check_truncation(samples: np.ndarray):
    magnitude = np.abs(samples)
    peak, boundary = magnitude.max(), max(magnitude[0], magnitude[-1])
    if boundary > TRUNCATION_THRESHOLD * peak:
        raise TruncationError(boundary, peak, TRUNCATION_THRESHOLD)


def _fit_decay(positions, samples, limit) -> float:
    excess = np.abs(samples - limit)
    peak = excess.max()
    window = (excess < 1e-3 * peak) & (excess > 1e-10 * peak) & (positions > 0)
    if np.count_nonzero(window) < 3:
        return np.nan
    slope, _ = np.polyfit(positions[window], np.log(excess[window]), 1)
    return float(-slope)


def _axis(grid: Grid) -> np.ndarray:
    if grid.d != 1:
        raise ParameterError('expected a one-dimensional grid, got %r' % grid)
    return grid.axes()[0]


# Ground states
###############
def ground_state_power_1d(alpha: float, omega: float, grid: Grid) -> Profile:
    r"""
    The explicit ground state of the pure power nonlinearity in one dimension

    .. math::

        \phi(x) = \left(\tfrac{(\alpha+2)\omega}{2}\right)^{1/\alpha}
        \operatorname{sech}^{2/\alpha}\left(\tfrac{\alpha\sqrt\omega}{2} x\right)

    :raises TruncationError: if ``grid`` does not contain the decay of ``φ``
    """
    if not alpha > 0 or not omega > 0:
        raise ParameterError('alpha and omega must be positive')
    positions = _axis(grid)
    parameters = {
        'amplitude': ((alpha + 2) * omega / 2) ** (1 / alpha),
        'kappa': alpha * np.sqrt(omega) / 2,
        'power': 2 / alpha,
    }
    samples = _power_sech(positions, 0, **parameters)
    _check_truncation(samples)
    profile = Profile(
        ProfileKind.GROUND_STATE, omega, 1, positions[0], grid.spacing[0], samples,
        slopes=_power_sech(positions, 1, **parameters),
        curvatures=_power_sech(positions, 2, **parameters),
        closed_form=ClosedForm('power_sech', parameters),
        tail_rates=(np.sqrt(omega), np.sqrt(omega)),
        decay_rate_a=np.sqrt(omega),
        nonlinearity=Power(alpha),
    )
    profile.residual = stationary_residual(profile)
    logger.info('built %r with residual %.3e', profile, profile.residual)
    return profile


class _Shot(NamedTuple):
    #: ``-1`` for undershooting, ``+1`` for overshooting
    verdict: int
    solution: Optional[object]


def _shooting_rhs(nl: Nonlinearity, omega: float, d: int):
    def rhs(radius, state):
        value, slope = state
        return [
            slope,
            -(d - 1) / radius * slope + omega * value - float(nl.f_real(value)),
        ]
    return rhs


def _shoot(nl: Nonlinearity, omega: float, d: int, height: float, r_max: float,
           dense: bool = False, stop_at: Optional[float] = None) -> _Shot:
    curvature = (omega * height - float(nl.f_real(height))) / d
    if curvature >= 0 and stop_at is None:
        return _Shot(-1, None)

    def crossing(radius, state):
        return state[0]
    crossing.terminal, crossing.direction = True, -1

    def turning(radius, state):
        return state[1]
    turning.terminal, turning.direction = True, 1

    def blowup(radius, state):
        return BLOWUP_FACTOR * height - abs(state[0])
    blowup.terminal = True
    events = [crossing, turning, blowup]
    if stop_at is not None:
        def matching(radius, state):
            return state[0] - stop_at
        matching.terminal, matching.direction = True, -1
        events.append(matching)
    solution = integrate.solve_ivp(
        _shooting_rhs(nl, omega, d),
        (SHOOT_START, r_max),
        [height + curvature * SHOOT_START ** 2 / 2, curvature * SHOOT_START],
        method='DOP853', rtol=ODE_RTOL, atol=ODE_ATOL,
        events=events, dense_output=dense,
    )
    if solution.t_events[2].size:
        raise BlowupInShooting(height, float(solution.t_events[2][0]))
    if stop_at is not None and solution.t_events[3].size:
        return _Shot(0, solution)
    if solution.t_events[0].size:
        return _Shot(1, solution)
    if solution.t_events[1].size:
        return _Shot(-1, solution)
    value, slope = solution.y[:, -1]
    # the growing mode decides where the solution heads
    return _Shot(-1 if slope + np.sqrt(omega) * value > 0 else 1, solution)


def _linear_tail(omega: float, d: int, radii: np.ndarray, anchor: float):
    r"""Values and slopes of :math:`r^{-\nu}K_\nu(\sqrt\omega r)`, normalised at ``anchor``"""
    order = (d - 2) / 2
    rate = np.sqrt(omega)
    ratio = (
        (radii / anchor) ** (-order)
        * special.kve(order, rate * radii) / special.kve(order, rate * anchor)
        * np.exp(-rate * (radii - anchor))
    )
    log_slope = -rate * special.kve(order + 1, rate * radii) / special.kve(
        order, rate * radii
    )
    return ratio, ratio * log_slope


def _scan_bracket(nl: Nonlinearity, omega: float, d: int, r_max: float,
                  s_max: float) -> Tuple[float, float]:
    height = 1e-4
    previous = None
    while height <= s_max:
        verdict = _shoot(nl, omega, d, height, r_max).verdict
        if previous is not None and previous < 0 < verdict:
            return height / SCAN_FACTOR, height
        previous = verdict
        height *= SCAN_FACTOR
    raise NoGroundState(
        nl, omega, 'no undershoot/overshoot transition for heights up to %g' % s_max
    )


def ground_state_shoot(nl: Nonlinearity, omega: float, d: int,
                       grid: RadialGrid) -> Profile:
    r"""
    Compute the ground state of :math:`-\phi'' - \tfrac{d-1}{r}\phi' + \omega\phi - f(\phi) = 0`

    The height :math:`\phi(0)` is bisected between undershooting (the
    solution turns up before reaching zero) and overshooting (it crosses
    zero). The bisected solution is kept up to where it dropped to a tenth
    of its height; beyond, it is matched to an inward integration started
    on the decaying linear tail :math:`r^{-\nu}K_\nu(\sqrt\omega r)`,
    :math:`\nu = (d-2)/2`, which is stable in that direction.

    :raises NoGroundState: if no bracket for the height is found
    :raises BlowupInShooting: if a trial solution leaves all bounds
    """
    if not omega > 0:
        raise ParameterError('omega must be positive, got %r' % omega)
    if d < 1:
        raise ParameterError('dimension must be at least 1, got %r' % d)
    s_max = 1e3
    if hasattr(nl, 's_max'):
        s_max = min(s_max, np.sqrt(nl.s_max))
    radii = grid.radii()
    low, high = _scan_bracket(nl, omega, d, grid.r_max, s_max)
    while high - low > BISECTION_WIDTH * max(1.0, high):
        middle = (low + high) / 2
        if _shoot(nl, omega, d, middle, grid.r_max).verdict < 0:
            low = middle
        else:
            high = middle
        logger.debug('ground state height in [%r, %r]', low, high)
    height = (low + high) / 2
    target = MATCH_LEVEL * height
    outward = _shoot(nl, omega, d, height, grid.r_max, dense=True, stop_at=target)
    if outward.verdict != 0:
        raise NoGroundState(nl, omega, 'bisected solution never decays to %g' % target)
    match_radius = float(outward.solution.t_events[3][0])
    rate = np.sqrt(omega)
    tail_start = min(grid.r_max, match_radius + np.log(TAIL_DEPTH) / rate)
    values = np.empty_like(radii)
    slopes = np.empty_like(radii)
    core = radii <= match_radius
    values[core], slopes[core] = outward.solution.sol(
        np.maximum(radii[core], SHOOT_START)
    )
    values[0], slopes[0] = height, 0.0
    if tail_start > match_radius:
        (ratio,), _ = _linear_tail(omega, d, np.array([tail_start]), match_radius)
        guess = target * ratio

        def inward(amplitude):
            (log_slope,) = _linear_tail(omega, d, np.array([tail_start]), tail_start)[1]
            return integrate.solve_ivp(
                _shooting_rhs(nl, omega, d), (tail_start, match_radius),
                [amplitude, amplitude * log_slope],
                method='DOP853', rtol=ODE_RTOL, atol=ODE_ATOL * guess,
                dense_output=True,
            )

        def mismatch(amplitude):
            return inward(amplitude).y[0, -1] - target
        amplitude = optimize.brentq(mismatch, guess / 4, guess * 4, xtol=1e-16 * guess,
                                    rtol=4e-16)
        middle = (radii > match_radius) & (radii <= tail_start)
        if middle.any():
            values[middle], slopes[middle] = inward(amplitude).sol(radii[middle])
    else:
        amplitude = float(outward.solution.sol(tail_start)[0])
    far = radii > tail_start
    if far.any():
        ratio, slope = _linear_tail(omega, d, radii[far], tail_start)
        values[far], slopes[far] = amplitude * ratio, amplitude * slope
    curvatures = omega * values - nl.f_real(values)
    with np.errstate(divide='ignore', invalid='ignore'):
        curvatures = np.where(
            radii > 0, curvatures - (d - 1) * slopes / radii, curvatures / d
        )
    profile = Profile(
        ProfileKind.GROUND_STATE, omega, d, 0.0, grid.spacing, values,
        slopes=slopes, curvatures=curvatures, radial=True,
        tail_rates=(rate, rate),
        decay_rate_a=_fit_decay(radii, values, 0.0),
        nonlinearity=nl,
        metadata={'height': height, 'match_radius': match_radius,
                  'tail_start': tail_start},
    )
    profile.residual = stationary_residual(profile, nl)
    logger.info('shot %r: height %r, residual %.3e', profile, height, profile.residual)
    return profile


# Kinks
#######
def _kink_branch(nl: Nonlinearity, kc: KinkConstants, anchor: float,
                 positions: np.ndarray):
    """Values of the kink at ``positions``, all on one side of ``anchor``"""
    b = kc.b
    scale = kc.omega0 * b * b
    values = np.empty_like(positions)
    if positions.size == 0:
        return values
    direction = 1 if positions[-1] > anchor else -1
    left_rate, right_rate = np.sqrt(kc.hprime_at_b), np.sqrt(kc.omega0)

    def slope(x, state):
        first_integral = float(kc.first_integral(nl, state[0]))
        if first_integral < -1e-10 * scale:
            raise FirstIntegralNegative(first_integral, float(state[0]))
        return [-np.sqrt(2 * max(first_integral, 0.0))]

    def switch(x, state):
        if direction > 0:
            return state[0] - KINK_TAIL_SWITCH * b
        return (1 - KINK_TAIL_SWITCH) * b - state[0]
    switch.terminal = True
    solution = integrate.solve_ivp(
        slope, (anchor, positions[-1]), [b / 2], method='DOP853',
        rtol=ODE_RTOL, atol=ODE_ATOL, events=[switch], dense_output=True,
    )
    if solution.t_events[0].size:
        start = float(solution.t_events[0][0])
        start_value = float(solution.y_events[0][0][0])
    else:
        start, start_value = float(positions[-1]), None
    core = (positions - start) * direction <= 0
    values[core] = solution.sol(positions[core])[0]
    tail = ~core
    if direction > 0:
        values[tail] = start_value * np.exp(-right_rate * (positions[tail] - start))
    else:
        values[tail] = b - (b - start_value) * np.exp(
            left_rate * (positions[tail] - start)
        )
    return values


def kink_profile(nl: Nonlinearity, kc: KinkConstants, grid: Grid,
                 anchor: float = 0.0) -> Profile:
    r"""
    The kink :math:`\phi_K` joining :math:`b` at :math:`-\infty` to :math:`0` at :math:`+\infty`

    Integrates the first integral :math:`\phi' = -\sqrt{2H(\phi)}`,
    :math:`H(s) = \omega_0 s^2/2 - F(s)`, in both directions from
    :math:`\phi(\text{anchor}) = b/2`. Close to the limits, where ``H``
    suffers from cancellation, the linearised exponential tails with rates
    :math:`\sqrt{h'(b)}` and :math:`\sqrt{\omega_0}` take over.

    :raises FirstIntegralNegative: if ``H`` is clearly negative on the way
    """
    positions = _axis(grid)
    right = positions[positions >= anchor]
    left = positions[positions < anchor][::-1]
    values = np.concatenate([
        _kink_branch(nl, kc, anchor, left)[::-1],
        _kink_branch(nl, kc, anchor, right),
    ])
    b = kc.b
    first_integral = np.maximum(kc.first_integral(nl, values), 0.0)
    left_rate, right_rate = np.sqrt(kc.hprime_at_b), np.sqrt(kc.omega0)
    slopes = np.where(
        values > (1 - KINK_TAIL_SWITCH) * b, -left_rate * (b - values),
        np.where(
            values < KINK_TAIL_SWITCH * b, -right_rate * values,
            -np.sqrt(2 * first_integral),
        ),
    )
    curvatures = kc.omega0 * values - nl.f_real(values)
    profile = Profile(
        ProfileKind.KINK, kc.omega0, 1, positions[0], grid.spacing[0], values,
        slopes=slopes, curvatures=curvatures,
        limits=(b, 0.0), tail_rates=(left_rate, right_rate),
        decay_rate_a=right_rate, nonlinearity=nl,
        metadata={'b': b, 'hprime_at_b': kc.hprime_at_b, 'anchor': anchor},
    )
    profile.residual = stationary_residual(profile, nl)
    logger.info('integrated %r with residual %.3e', profile, profile.residual)
    return profile


def _gp_kink_profile(c: float, origin: float, spacing: float, count: int) -> Profile:
    parameters = {
        'amplitude': np.sqrt((2 - c * c) / 2),
        'kappa': np.sqrt(2 - c * c) / 2,
        'imaginary': c / np.sqrt(2),
    }
    positions = origin + spacing * np.arange(count)
    amplitude, imaginary = parameters['amplitude'], parameters['imaginary']
    profile = Profile(
        ProfileKind.KINK, 0.0, 1, origin, spacing,
        _gp_tanh(positions, 0, **parameters),
        closed_form=ClosedForm('gp_kink', parameters),
        limits=(-amplitude + 1j * imaginary, amplitude + 1j * imaginary),
        tail_rates=(2 * parameters['kappa'],) * 2,
        decay_rate_a=2 * parameters['kappa'],
        intrinsic_velocity=c,
        nonlinearity=GrossPitaevskii(),
        metadata={'c': c},
    )
    profile.residual = stationary_residual(profile)
    return profile


def gp_kink(c: float, grid: Grid) -> Profile:
    r"""
    The Gross-Pitaevskii kink travelling at speed ``c``

    .. math::

        \phi_K(x) = \sqrt{\tfrac{2-c^2}{2}}\tanh\left(\tfrac{\sqrt{2-c^2}}{2}x\right)
        + \tfrac{ic}{\sqrt2}

    :math:`\phi_K(x - ct)` solves the Gross-Pitaevskii equation exactly;
    the profile carries ``c`` as its intrinsic velocity and ``ω = 0``.

    :raises SpeedAboveSound: if ``|c| ≥ √2``
    """
    if abs(c) >= np.sqrt(2):
        raise SpeedAboveSound(c)
    positions = _axis(grid)
    return _gp_kink_profile(c, positions[0], grid.spacing[0], positions.size)


# Persistence
#############
def _wire_kind(profile: Profile) -> int:
    return 2 if profile.is_complex else int(profile.kind)


def save_profile(profile: Profile, path: Union[str, Path]) -> Path:
    """Write ``profile`` as an ``NLSP`` record, evaluated in its current orientation"""
    path = Path(path)
    record = ProfileRecord(
        _wire_kind(profile), profile.d, profile.omega, profile.origin,
        profile.spacing, profile(profile.positions()),
    )
    path.write_bytes(encode_profile(record, profile.is_complex))
    logger.info('wrote %r to %s', profile, path)
    return path


def load_profile(path: Union[str, Path],
                 nonlinearity: Optional[Nonlinearity] = None) -> Profile:
    """
    Read a profile from an ``NLSP`` record

    Gross-Pitaevskii kinks recover their closed form. Sampled kinks need
    ``nonlinearity`` to recover their exact limits and tail rates;
    otherwise these are estimated from the samples.
    """
    path = Path(path)
    record = decode_profile(path.read_bytes(), complex_samples_kinds=(2,), source=path)
    if record.kind == 2:
        return _gp_kink_profile(
            float(np.sqrt(2) * record.samples[0].imag),
            record.origin, record.spacing, record.samples.size,
        )
    if record.kind not in (0, 1):
        raise DomainError('%s holds unknown profile kind %d' % (path, record.kind))
    positions = record.origin + record.spacing * np.arange(record.samples.size)
    if record.kind == ProfileKind.GROUND_STATE:
        rate = np.sqrt(record.omega)
        profile = Profile(
            ProfileKind.GROUND_STATE, record.omega, record.d, record.origin,
            record.spacing, record.samples, radial=record.origin == 0.0,
            tail_rates=(rate, rate),
            decay_rate_a=_fit_decay(np.abs(positions), record.samples, 0.0),
            nonlinearity=nonlinearity,
        )
    else:
        if nonlinearity is not None:
            kc = kink_constants(nonlinearity)
            b, rates = kc.b, (np.sqrt(kc.hprime_at_b), np.sqrt(kc.omega0))
        else:
            b = float(record.samples[0])
            rates = (
                _fit_decay(-positions, record.samples, b),
                _fit_decay(positions, record.samples, 0.0),
            )
        profile = Profile(
            ProfileKind.KINK, record.omega, 1, record.origin, record.spacing,
            record.samples, limits=(b, 0.0), tail_rates=rates,
            decay_rate_a=rates[1], nonlinearity=nonlinearity,
        )
    if nonlinearity is not None:
        profile.residual = stationary_residual(profile, nonlinearity)
    return profile


def sample_profile(profile: Profile, grid: Grid, center: Sequence[float] = None
                   ) -> np.ndarray:
    """Values of ``profile`` centred at ``center`` on every sample of ``grid``"""
    center = (0.0,) * grid.d if center is None else center
    displacement = [x - c for x, c in zip(grid.coordinates(), center)]
    if profile.d == 1 and not profile.radial:
        return profile(displacement[0])
    return profile(np.sqrt(sum(xi ** 2 for xi in displacement)))


def scale_profile(profile: Profile, omega: float, alpha: float) -> Profile:
    r"""
    Rescale a pure power ground state to the frequency ``omega``

    Uses the scaling symmetry :math:`\phi_\omega(x) = (\omega/\omega_1)^{1/\alpha}
    \phi_{\omega_1}(\sqrt{\omega/\omega_1}\, x)` of :math:`f(z) = |z|^\alpha z`.
    """
    if not isinstance(profile.nonlinearity, Power) or \
            profile.nonlinearity.alpha != alpha:
        raise ParameterError('scaling requires a ground state of Power(%r)' % alpha)
    ratio = omega / profile.omega
    stretch, height = np.sqrt(ratio), ratio ** (1 / alpha)
    scaled = profile.copy()
    scaled.omega = float(omega)
    scaled.origin = profile.origin / stretch
    scaled.spacing = profile.spacing / stretch
    scaled.samples = height * profile.samples
    if profile.slopes is not None:
        scaled.slopes = height * stretch * profile.slopes
    if profile.curvatures is not None:
        scaled.curvatures = height * ratio * profile.curvatures
    scaled.tail_rates = tuple(rate * stretch for rate in profile.tail_rates)
    scaled.decay_rate_a = profile.decay_rate_a * stretch
    scaled.residual = profile.residual * height * ratio
    scaled._interpolants = {}
    if profile.closed_form is not None:
        parameters = dict(profile.closed_form.parameters)
        parameters['amplitude'] *= height
        parameters['kappa'] *= stretch
        scaled.closed_form = ClosedForm(profile.closed_form.tag, parameters)
    return scaled


@functools.lru_cache(maxsize=64)
def ground_state(nl: Nonlinearity, omega: float, d: int = 1) -> Profile:
    """
    The ground state of ``nl`` at ``omega`` on automatically sized samples

    Pure powers in one dimension use the closed form; all other cases
    are shot on radii up to ``40/√ω``. Results are cached.
    """
    if isinstance(nl, Power) and d == 1:
        return ground_state_power_1d(
            nl.alpha, omega, Grid.regular(80 / np.sqrt(omega), 4096)
        )
    return ground_state_shoot(nl, omega, d, RadialGrid(40 / np.sqrt(omega), 4001))


@functools.lru_cache(maxsize=16)
def kink(nl: Nonlinearity) -> Profile:
    """The kink of ``nl`` on automatically sized samples, cached"""
    kc = kink_constants(nl)
    length = 160 / np.sqrt(min(kc.omega0, kc.hprime_at_b))
    return kink_profile(nl, kc, Grid.regular(length, 8192))
