r"""
Soliton trains, kink-soliton trains and their admissibility

A train superposes moving components,

.. math::

    W(t, x) = K_0(t, x) + \sum_{j=1}^N R_j(t, x) + K_{N+1}(t, x)

where either kink may be absent. The admissibility conditions of the
existence results for multi-solitons, infinite soliton trains and
kink-soliton trains are checked by report-style functions which never
raise for inadmissible trains.
"""
import logging
import math
from typing import NamedTuple, Optional, Sequence, Tuple, List, Union

import numpy as np

from ..exceptions import ParameterError, ConfigError
from .._core.grid import Grid, Field, RadialGrid
from .._primitives.nonlinearity import Nonlinearity, DoublePower, Power
from .._primitives.profiles import (
    Profile,
    ProfileKind,
    ground_state,
    ground_state_power_1d,
    ground_state_shoot,
    scale_profile,
    kink,
    mirror_profile,
)
from .._primitives.waves import WaveSpec, boost


logger = logging.getLogger(__name__)

#: relative boundary magnitude above which localized components are truncated
BOUNDARY_WARNING = 1e-10
#: number of components stored for infinite families
INFINITE_PREVIEW = 8


def japanese_bracket(v: Sequence[float]) -> float:
    """``⟨v⟩ = √(1 + |v|²)``"""
    return math.sqrt(1 + sum(component ** 2 for component in v))


def _distance(left: Sequence[float], right: Sequence[float]) -> float:
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(left, right)))


class TrainFamily(NamedTuple):
    r"""
    Geometric family of trains with :math:`\omega_j = \omega_1 q^{j-1}`

    :param omega_ratio: the ratio ``q`` in ``(0, 1)``
    :param omega1: the frequency of the first soliton
    :param v_sharp: the relative speed threshold
    :param N: number of solitons, :py:data:`None` for an infinite train
    :param phases: ``'zero'``, ``'alternating'`` or explicit phases, repeated
    """
    omega_ratio: float
    omega1: float
    v_sharp: float
    N: Optional[int] = None
    phases: Union[str, Tuple[float, ...]] = 'zero'

    def omega(self, j: int) -> float:
        return self.omega1 * self.omega_ratio ** (j - 1)

    def phase(self, j: int) -> float:
        if self.phases == 'zero':
            return 0.0
        elif self.phases == 'alternating':
            return math.pi * ((j - 1) % 2)
        return float(self.phases[(j - 1) % len(self.phases)])

    def velocities(self, count: int) -> List[float]:
        velocities = [0.0]
        for j in range(2, count + 1):
            velocities.append(velocities[-1] + self.v_sharp / math.sqrt(self.omega(j)))
        return velocities

    def geometric_tail(self, exponent: float, N: int) -> float:
        r"""Closed form of :math:`\sum_{j>N} \omega_j^{e}`, infinite if divergent"""
        factor = self.omega_ratio ** exponent
        if factor >= 1:
            return math.inf
        return self.omega1 ** exponent * factor ** N / (1 - factor)


class TrainDerived(NamedTuple):
    """Admissibility quantities derived from the components of a train"""
    #: half the smallest soliton frequency
    omega_star: float
    #: smallest relative speed ``|v_j − v_k|`` over all components
    v_star_T1: float
    #: smallest scaled relative speed ``√ω_j |v_k − v_j|`` over solitons
    v_star_T2: float
    #: gradient bound sum ``Σ⟨v_j⟩ω_j^{1/α − d/4}`` over stored solitons
    V_star: float
    #: integrability sum ``Σω_j^{1/α − d/(2r₀)}`` over stored solitons
    integrability_sum: float
    r0: float
    a: float


class TrainSpec:
    r"""
    Ordered components of a train with optional kinks at both ends

    :param components: the solitons, as :py:class:`~.WaveSpec` of ground states
    :param left_kink: a kink with limit ``0`` at :math:`+\infty`
    :param right_kink: a kink with limit ``0`` at :math:`-\infty`
    :param alpha: the leading power of the nonlinearity
    :param r0: integrability exponent, by default :math:`\max(1, d\alpha/2) + 1`
    :param a: decay fraction of the uniform bound
    :param family: the generating family, if any
    :param infinite: whether the train stands for an infinite family
    :param metadata: free-form annotations such as tail bounds

    The :py:attr:`~.derived` quantities are computed at construction;
    trains are immutable and every modification creates a new train.
    """
    __slots__ = (
        'components', 'left_kink', 'right_kink', 'alpha', 'r0', 'a',
        'family', 'infinite', 'metadata', 'derived',
    )

    def __init__(
        self,
        components: Sequence[WaveSpec] = (),
        left_kink: Optional[WaveSpec] = None,
        right_kink: Optional[WaveSpec] = None,
        alpha: Optional[float] = None,
        r0: Optional[float] = None,
        a: float = 0.5,
        family: Optional[TrainFamily] = None,
        infinite: bool = False,
        metadata: Optional[dict] = None,
    ):
        components = tuple(components)
        for spec in components:
            if spec.is_kink:
                raise ParameterError('kinks may only appear at the ends of a train')
        if left_kink is not None and (
            not left_kink.is_kink or left_kink.profile.limit_plus_inf != 0
        ):
            raise ParameterError('left kinks need the limit 0 at +inf')
        if right_kink is not None and (
            not right_kink.is_kink or right_kink.profile.limit_minus_inf != 0
        ):
            raise ParameterError('right kinks need the limit 0 at -inf')
        if not components and left_kink is None and right_kink is None:
            raise ParameterError('a train needs at least one component')
        self.components = components
        self.left_kink = left_kink
        self.right_kink = right_kink
        if left_kink is not None or right_kink is not None:
            if self.d != 1:
                raise ParameterError('kink trains exist in one dimension only')
            speeds = [spec.velocity[0] for spec in self.waves()]
            if any(right <= left for left, right in zip(speeds, speeds[1:])):
                raise ParameterError(
                    'kink trains need strictly increasing velocities, got %r' % speeds
                )
        self.alpha = alpha
        d = self.d
        self.r0 = float(r0) if r0 is not None else (
            max(1.0, d * alpha / 2) + 1 if alpha is not None else math.nan
        )
        self.a = float(a)
        self.family = family
        self.infinite = infinite
        self.metadata = dict(metadata or {})
        self.derived = self._derive()

    @property
    def d(self) -> int:
        return self.waves()[0].d

    @property
    def N(self) -> int:
        """Number of stored solitons"""
        return len(self.components)

    def waves(self) -> List[WaveSpec]:
        """All components from left to right, kinks included"""
        return (
            ([self.left_kink] if self.left_kink is not None else [])
            + list(self.components)
            + ([self.right_kink] if self.right_kink is not None else [])
        )

    def _derive(self) -> TrainDerived:
        waves = self.waves()
        omegas = [spec.omega for spec in self.components]
        v_star_T1 = min(
            (
                _distance(left.velocity, right.velocity)
                for index, left in enumerate(waves) for right in waves[index + 1:]
            ),
            default=math.inf,
        )
        v_star_T2 = min(
            (
                math.sqrt(first.omega) * _distance(first.v, second.v)
                for first in self.components for second in self.components
                if first is not second
            ),
            default=math.inf,
        )
        if self.alpha is not None and omegas:
            V_star = sum(
                japanese_bracket(spec.v) * spec.omega ** (1 / self.alpha - self.d / 4)
                for spec in self.components
            )
            integrability = sum(
                omega ** (1 / self.alpha - self.d / (2 * self.r0)) for omega in omegas
            )
        else:
            V_star = integrability = math.nan
        return TrainDerived(
            omega_star=min(omegas) / 2 if omegas else math.nan,
            v_star_T1=v_star_T1,
            v_star_T2=v_star_T2,
            V_star=V_star,
            integrability_sum=integrability,
            r0=self.r0,
            a=self.a,
        )

    def replace(self, **changes) -> 'TrainSpec':
        parameters = {
            'components': self.components, 'left_kink': self.left_kink,
            'right_kink': self.right_kink, 'alpha': self.alpha, 'r0': self.r0,
            'a': self.a, 'family': self.family, 'infinite': self.infinite,
            'metadata': self.metadata,
        }
        parameters.update(changes)
        return TrainSpec(**parameters)

    def shifted(self, s: float) -> 'TrainSpec':
        """The train whose profile at time ``t`` is this train's profile at ``t + s``"""
        return self.replace(
            components=[spec.shifted(s) for spec in self.components],
            left_kink=None if self.left_kink is None else self.left_kink.shifted(s),
            right_kink=None if self.right_kink is None else self.right_kink.shifted(s),
        )

    def __len__(self):
        return len(self.waves())

    def __repr__(self):
        return '<%s of %s%d solitons%s, v*=%.3g>' % (
            self.__class__.__name__,
            'kink + ' if self.left_kink is not None else '',
            self.N,
            ' + kink' if self.right_kink is not None else '',
            self.derived.v_star_T1,
        )


def sum_profile(train: TrainSpec, t: float, grid: Grid) -> Field:
    r"""
    The superposition :math:`W(t) = \sum_j R_j(t)` of all components on ``grid``

    Localized components whose boundary magnitude exceeds
    :py:data:`BOUNDARY_WARNING` of their peak are reported as truncated;
    kink backgrounds are exempt.
    """
    if train.infinite:
        raise ParameterError('infinite trains must be truncated before sampling')
    if grid.d != train.d:
        raise ParameterError('train in d=%d cannot be sampled on %r' % (train.d, grid))
    coordinates = grid.coordinates()
    total = np.zeros(grid.shape, dtype=complex)
    for spec in train.waves():
        values = boost(spec, t, coordinates)
        if not spec.is_kink:
            magnitude = np.abs(values)
            peak = magnitude.max()
            field = Field(grid, values, t)
            if peak > 0 and field.boundary_ratio() > BOUNDARY_WARNING:
                logger.warning(
                    'component %r is truncated by %r at t=%s: boundary magnitude %.3e',
                    spec, grid, t, field.boundary_ratio() * peak,
                )
        total += values
    return Field(grid, total, t)


# Admissibility reports
#######################
class Theorem1Report(NamedTuple):
    """Multi-soliton admissibility: ``ω⋆ = ½ min ω_j`` and ``v⋆ = min |v_j − v_k|``"""
    omega_star: float
    v_star: float
    ground_states_only: bool
    #: two components share a velocity
    colliding: bool
    #: a single component leaves ``v⋆`` unconstrained
    unconstrained: bool

    @property
    def admissible(self) -> bool:
        return self.ground_states_only and not self.colliding


def validate_theorem1(train: TrainSpec) -> Theorem1Report:
    """Report the parameters entering the multi-soliton existence result"""
    if train.infinite or train.left_kink is not None or train.right_kink is not None:
        raise ParameterError('multi-soliton trains are finite and free of kinks')
    v_star = train.derived.v_star_T1
    return Theorem1Report(
        omega_star=train.derived.omega_star,
        v_star=v_star,
        ground_states_only=all(
            spec.profile.kind == ProfileKind.GROUND_STATE for spec in train.components
        ),
        colliding=v_star == 0,
        unconstrained=math.isinf(v_star),
    )


class UniformBound(NamedTuple):
    """Fitted constants ``C_j`` of ``|φ_j| + ω_j^{-1/2}|∇φ_j| ≤ Cω_j^{1/α}e^{−a√ω_j|x|}``"""
    constants: Tuple[float, ...]

    @property
    def constant(self) -> float:
        return max(self.constants, default=0.0)

    @property
    def spread(self) -> float:
        """Relative spread of the constants, ``0`` if independent of ``j``"""
        if not self.constants:
            return 0.0
        return (max(self.constants) - min(self.constants)) / max(self.constants)

    @property
    def holds(self) -> bool:
        return all(math.isfinite(constant) for constant in self.constants)


def _uniform_constant(profile: Profile, alpha: float, a: float) -> float:
    positions = profile.positions()
    omega = profile.omega
    bound = np.abs(profile(positions)) + np.abs(profile.derivative(positions)) / \
        math.sqrt(omega)
    envelope = omega ** (1 / alpha) * np.exp(-a * math.sqrt(omega) * np.abs(positions))
    return float(np.max(bound / envelope))


class Theorem2Report(NamedTuple):
    """Infinite soliton train admissibility, one entry per condition"""
    uniform_bound: UniformBound
    integrability_exponent: float
    integrability_partial: float
    #: closed-form bound of the integrability sum beyond the stored solitons
    integrability_tail: float
    v_star: float
    v_sharp: Optional[float]
    V_star: float
    #: closed-form bound of the gradient sum beyond the stored solitons
    V_star_tail: float
    #: whether the gradient bound applies, known only with ``alpha2``
    gradient_bound_required: Optional[bool]
    #: the definition used for ``⟨v⟩``
    bracket: str
    alpha_mid: Optional[float]

    @property
    def integrable(self) -> bool:
        return math.isfinite(self.integrability_partial + self.integrability_tail)

    @property
    def high_speeds(self) -> bool:
        if self.v_sharp is None:
            return self.v_star > 0
        return self.v_star >= self.v_sharp

    @property
    def gradient_bounded(self) -> bool:
        if not self.gradient_bound_required:
            return True
        return math.isfinite(self.V_star + self.V_star_tail)

    @property
    def admissible(self) -> bool:
        return (
            self.uniform_bound.holds and self.integrable and self.high_speeds
            and self.gradient_bounded
        )


def _family_tail(train: TrainSpec, exponent: float, N: int) -> float:
    if train.family is None:
        return 0.0
    if train.family.N is not None and N >= train.family.N:
        return 0.0
    return train.family.geometric_tail(exponent, N)


def _gradient_tail(train: TrainSpec, alpha: float, N: int) -> float:
    family = train.family
    if family is None or (family.N is not None and N >= family.N):
        return 0.0
    # v_j ≤ v♯ ω_j^{-1/2} / (1 - √q) along the velocity recurrence
    exponent = 1 / alpha - train.d / 4
    spread = family.v_sharp / (1 - math.sqrt(family.omega_ratio))
    return (
        family.geometric_tail(exponent, N)
        + spread * family.geometric_tail(exponent - 1 / 2, N)
    )


def validate_theorem2(train: TrainSpec, alpha: float, r0: float, a: float,
                      alpha2: Optional[float] = None) -> Theorem2Report:
    r"""
    Check the four conditions of the infinite soliton train existence result

    :param alpha: the leading exponent
    :param r0: integrability exponent, :math:`r_0 > \max(1, d\alpha/2)`
    :param a: decay fraction of the uniform bound, :math:`0 < a < 1`
    :param alpha2: the largest exponent, deciding whether the gradient
                   bound is required (for :math:`\alpha < \alpha_2/(2+\alpha_2)`)

    Sums are evaluated over the stored solitons; generated families add
    the closed-form geometric tail of the remaining ones.
    """
    d = train.d
    if not r0 > max(1.0, d * alpha / 2):
        raise ParameterError('r0 must exceed max(1, d*alpha/2) = %r, got %r' % (
            max(1.0, d * alpha / 2), r0
        ))
    if not 0 < a < 1:
        raise ParameterError('a must lie in (0, 1), got %r' % a)
    solitons = train.components
    exponent = 1 / alpha - d / (2 * r0)
    partial = sum(spec.omega ** exponent for spec in solitons)
    V_star = sum(
        japanese_bracket(spec.v) * spec.omega ** (1 / alpha - d / 4) for spec in solitons
    )
    nonlinearity = solitons[0].profile.nonlinearity if solitons else None
    return Theorem2Report(
        uniform_bound=UniformBound(tuple(
            _uniform_constant(spec.profile, alpha, a) for spec in solitons
        )),
        integrability_exponent=exponent,
        integrability_partial=partial,
        integrability_tail=_family_tail(train, exponent, len(solitons)),
        v_star=train.derived.v_star_T2,
        v_sharp=None if train.family is None else train.family.v_sharp,
        V_star=V_star,
        V_star_tail=_gradient_tail(train, alpha, len(solitons)),
        gradient_bound_required=None if alpha2 is None else alpha < alpha2 / (2 + alpha2),
        bracket='sqrt(1+|v|^2)',
        alpha_mid=None if nonlinearity is None else nonlinearity.alpha_mid,
    )


class Theorem3Report(NamedTuple):
    """Finite kink-soliton train admissibility"""
    one_dimensional: bool
    increasing_velocities: bool
    #: smallest relative speed over all components, kinks included
    v_star: float
    left_kink: bool
    right_kink: bool
    #: ``φ_K′`` decays exponentially at both ends of every kink
    localized_derivatives: bool

    @property
    def admissible(self) -> bool:
        return (
            self.one_dimensional and self.increasing_velocities
            and (self.left_kink or self.right_kink) and self.localized_derivatives
            and self.v_star > 0
        )


def validate_theorem3(train: TrainSpec) -> Theorem3Report:
    """Check the finite kink-soliton train conditions; one kink may be dropped"""
    waves = train.waves()
    speeds = [spec.velocity[0] for spec in waves] if train.d == 1 else []
    kinks = [spec for spec in (train.left_kink, train.right_kink) if spec is not None]
    return Theorem3Report(
        one_dimensional=train.d == 1,
        increasing_velocities=all(
            right > left for left, right in zip(speeds, speeds[1:])
        ),
        v_star=train.derived.v_star_T1,
        left_kink=train.left_kink is not None,
        right_kink=train.right_kink is not None,
        localized_derivatives=all(
            min(spec.profile.tail_rates) > 0 for spec in kinks
        ),
    )


class Theorem4Report(NamedTuple):
    """Infinite kink-soliton train admissibility"""
    #: ``0 < α < 4/3`` holds
    first_branch: bool
    #: ``4/3 ≤ α < √2 < β = 2/α`` holds
    second_branch: bool
    has_left_kink: bool
    #: the conditions on the train, with the kink as component ``0``
    train: Optional[Theorem2Report]

    @property
    def exponents_admissible(self) -> bool:
        return self.first_branch or self.second_branch

    @property
    def admissible(self) -> bool:
        return (
            self.exponents_admissible and self.has_left_kink
            and self.train is not None and self.train.admissible
        )


def validate_theorem4(train: TrainSpec, alpha: float, beta: float,
                      r0: Optional[float] = None, a: Optional[float] = None
                      ) -> Theorem4Report:
    r"""
    Check the exponent window and train conditions of infinite kink-soliton trains

    The train conditions are those of :py:func:`~.validate_theorem2`
    with the kink counted as the component of index ``0``: it enters the
    integrability and speed conditions with its frequency :math:`\omega_0`.
    Without an ``r0`` from the caller or the train, the default
    :math:`\max(1, d\alpha/2) + 1` of :py:class:`~.TrainSpec` is used and
    logged as a warning.
    """
    first = 0 < alpha < 4 / 3
    second = 4 / 3 <= alpha < math.sqrt(2) < beta and math.isclose(
        beta, 2 / alpha, rel_tol=1e-12
    )
    report = None
    if train.left_kink is not None:
        r0 = train.r0 if r0 is None else r0
        if not math.isfinite(r0):
            r0 = max(1.0, train.d * alpha / 2) + 1
            logger.warning(
                'train has no integrability exponent, using r0=%g for alpha=%g',
                r0, alpha,
            )
        a = train.a if a is None else a
        solitons = validate_theorem2(train, alpha, r0, a)
        kink_spec = train.left_kink
        exponent = solitons.integrability_exponent
        speeds = [
            math.sqrt(kink_spec.omega) * _distance(kink_spec.v, spec.v)
            for spec in train.components
        ] + [
            math.sqrt(spec.omega) * _distance(spec.v, kink_spec.v)
            for spec in train.components
        ]
        report = solitons._replace(
            integrability_partial=solitons.integrability_partial
            + kink_spec.omega ** exponent,
            v_star=min([solitons.v_star] + speeds),
            V_star=solitons.V_star + japanese_bracket(kink_spec.v)
            * kink_spec.omega ** (1 / alpha - 1 / 4),
        )
    return Theorem4Report(
        first_branch=first,
        second_branch=second,
        has_left_kink=train.left_kink is not None,
        train=report,
    )


# Generation and truncation
###########################
def _power_profiles(alpha: float, d: int, base: Optional[Profile]):
    if base is None:
        if d == 1:
            base = ground_state_power_1d(alpha, 1.0, Grid.regular(80.0, 4096))
        else:
            base = ground_state_shoot(Power(alpha), 1.0, d, RadialGrid(40.0, 4001))

    def profile(omega):
        return base if omega == base.omega else scale_profile(base, omega, alpha)
    return profile


def generate_train_params(family: TrainFamily, alpha: float, d: int,
                          r0: Optional[float] = None, a: float = 0.5,
                          base: Optional[Profile] = None) -> TrainSpec:
    r"""
    Construct the soliton train of a geometric family

    Frequencies are :math:`\omega_j = \omega_1 q^{j-1}`, positions
    :math:`x_j = 0` and velocities follow
    :math:`v_{j+1} = v_j + v_\sharp/\sqrt{\omega_{j+1}}` along the first
    axis, so that :math:`\sqrt{\omega_j}|v_k - v_j| \ge v_\sharp` for all
    pairs. Profiles are rescaled pure power ground states.

    Infinite families store their first :py:data:`INFINITE_PREVIEW`
    solitons and must pass through :py:func:`~.truncate_train` before
    being sampled.
    """
    if not 0 < family.omega_ratio < 1:
        raise ParameterError('omega_ratio must lie in (0, 1), got %r' % family.omega_ratio)
    if not family.omega1 > 0 or family.v_sharp < 0:
        raise ParameterError('omega1 must be positive and v_sharp non-negative')
    if family.N is not None and family.N < 1:
        raise ParameterError('families need at least one soliton, got N=%r' % family.N)
    count = INFINITE_PREVIEW if family.N is None else family.N
    profile = _power_profiles(alpha, d, base)
    components = [
        WaveSpec(
            profile(family.omega(j)),
            gamma=family.phase(j),
            x0=(0.0,) * d,
            v=(velocity,) + (0.0,) * (d - 1),
        )
        for j, velocity in zip(range(1, count + 1), family.velocities(count))
    ]
    return TrainSpec(
        components, alpha=alpha, r0=r0, a=a, family=family,
        infinite=family.N is None,
    )


def truncation_order(family: TrainFamily, exponent: float, eps_tail: float) -> int:
    """Smallest ``N`` whose integrability tail is below ``eps_tail``"""
    N = 1
    while family.geometric_tail(exponent, N) >= eps_tail:
        N += 1
        if N > 10000:
            raise ParameterError('the integrability sum does not converge')
    return N


def truncate_train(train: TrainSpec, eps_tail: float, base: Optional[Profile] = None
                   ) -> TrainSpec:
    """
    Truncate a generated infinite train where its integrability tail drops below ``eps_tail``

    The neglected tail bound is recorded as ``metadata['tail_bound']``.
    """
    if not eps_tail > 0:
        raise ParameterError('eps_tail must be positive, got %r' % eps_tail)
    if train.family is None or train.alpha is None:
        raise ParameterError('only generated trains can be truncated')
    exponent = 1 / train.alpha - train.d / (2 * train.r0)
    N = truncation_order(train.family, exponent, eps_tail)
    if train.family.N is not None:
        N = min(N, train.family.N)
    if base is None and train.components:
        base = train.components[0].profile
    truncated = generate_train_params(
        train.family._replace(N=N), train.alpha, train.d, r0=train.r0, a=train.a,
        base=base,
    )
    tail = train.family.geometric_tail(exponent, N)
    logger.info('truncated %r after %d solitons, tail bound %.3e', train, N, tail)
    return truncated.replace(
        family=train.family,
        metadata=dict(train.metadata, tail_bound=tail, eps_tail=eps_tail),
    )


# Configuration
###############
def _number(block: dict, key: str, path: str, default=None) -> float:
    try:
        value = block[key] if default is None else block.get(key, default)
        return float(value)
    except KeyError:
        raise ConfigError('%s.%s' % (path, key), 'missing field') from None
    except (TypeError, ValueError):
        raise ConfigError('%s.%s' % (path, key), 'expected a number') from None


def _vector(block: dict, key: str, path: str, d: int) -> Tuple[float, ...]:
    value = block.get(key, 0.0)
    vector = np.atleast_1d(np.asarray(value, dtype=float))
    if vector.size == 1 and d > 1:
        vector = np.concatenate([vector, np.zeros(d - 1)])
    if vector.size != d:
        raise ConfigError('%s.%s' % (path, key), 'expected %d components' % d)
    return tuple(vector.tolist())


def _kink_spec(block: dict, nl: Nonlinearity, path: str, right: bool) -> WaveSpec:
    if not isinstance(block, dict):
        raise ConfigError(path, 'expected an object')
    profile = kink(nl)
    if right:
        profile = mirror_profile(profile)
    return WaveSpec(
        profile,
        gamma=_number(block, 'gamma', path, 0.0),
        x0=_vector(block, 'x0', path, 1),
        v=_vector(block, 'v', path, 1),
    )


def train_from_config(block: dict, nl: Nonlinearity, d: int = 1,
                      path: str = 'train') -> TrainSpec:
    """
    Create a train from its config block

    The block either lists ``components`` explicitly, each with ``omega``,
    ``gamma``, ``x0`` and ``v``, or gives a generating ``family``.
    ``left_kink`` and ``right_kink`` add the kink of ``nl``.
    """
    if not isinstance(block, dict):
        raise ConfigError(path, 'expected an object')
    exponents = nl.exponents
    alpha = block.get('alpha', exponents[0] if exponents else None)
    r0 = block.get('r0')
    a = _number(block, 'a', path, 0.5)
    if 'family' in block:
        family_block = block['family']
        family_path = path + '.family'
        if not isinstance(family_block, dict):
            raise ConfigError(family_path, 'expected an object')
        phases = family_block.get('phases', 'zero')
        family = TrainFamily(
            omega_ratio=_number(family_block, 'omega_ratio', family_path),
            omega1=_number(family_block, 'omega1', family_path, 1.0),
            v_sharp=_number(family_block, 'v_sharp', family_path),
            N=family_block.get('N'),
            phases=phases if isinstance(phases, str) else tuple(phases),
        )
        if alpha is None:
            raise ConfigError(path + '.alpha', 'families need a power exponent')
        try:
            return generate_train_params(family, float(alpha), d, r0=r0, a=a)
        except ParameterError as err:
            raise ConfigError(family_path, str(err)) from None
    components = []
    for index, component in enumerate(block.get('components', ())):
        component_path = '%s.components[%d]' % (path, index)
        if not isinstance(component, dict):
            raise ConfigError(component_path, 'expected an object')
        omega = _number(component, 'omega', component_path)
        components.append(WaveSpec(
            ground_state(nl, omega, d),
            gamma=_number(component, 'gamma', component_path, 0.0),
            x0=_vector(component, 'x0', component_path, d),
            v=_vector(component, 'v', component_path, d),
        ))
    try:
        return TrainSpec(
            components,
            left_kink=None if 'left_kink' not in block else _kink_spec(
                block['left_kink'], nl, path + '.left_kink', right=False
            ),
            right_kink=None if 'right_kink' not in block else _kink_spec(
                block['right_kink'], nl, path + '.right_kink', right=True
            ),
            alpha=None if alpha is None else float(alpha),
            r0=r0,
            a=a,
        )
    except ParameterError as err:
        raise ConfigError(path, str(err)) from None


def train_to_config(train: TrainSpec) -> dict:
    """The config block of ``train``, as a family if it was generated"""
    block = {'a': train.a}
    if train.alpha is not None:
        block['alpha'] = train.alpha
    if math.isfinite(train.r0):
        block['r0'] = train.r0
    if train.family is not None:
        family = train.family._asdict()
        if not isinstance(family['phases'], str):
            family['phases'] = list(family['phases'])
        if not train.infinite:
            family['N'] = train.N
        block['family'] = family
        return block
    block['components'] = [spec.to_config() for spec in train.components]
    for key, spec in (('left_kink', train.left_kink), ('right_kink', train.right_kink)):
        if spec is not None:
            block[key] = {'gamma': spec.gamma, 'x0': spec.x0[0], 'v': spec.v[0]}
    return block


def kink_train_nonlinearity(train: TrainSpec) -> Optional[DoublePower]:
    """The double power nonlinearity of a kink train, if any"""
    for spec in (train.left_kink, train.right_kink):
        if spec is not None and isinstance(spec.profile.nonlinearity, DoublePower):
            return spec.profile.nonlinearity
    return None
