r"""
Phase covariant nonlinearities :math:`f(z) = g(|z|^2) z`

Each nonlinearity is defined by the scalar function :math:`g` on
:math:`[0, \infty)`. Everything else is derived from it:

* :math:`f(z) = g(|z|^2) z`, the nonlinearity itself,
* :math:`G(s) = \int_0^s g`, entering the focusing condition,
* :math:`F(s) = \int_0^s f(\tau) d\tau = G(s^2)/2`, the potential of the energy.

The assumption checks in this module are reports: they never raise for a
nonlinearity that fails an assumption.
"""
import logging
from typing import Optional, Tuple, NamedTuple, ClassVar, Sequence, Union

import numpy as np
from scipy import integrate, optimize
from scipy.interpolate import CubicSpline

from ..exceptions import DomainError, ParameterError, NoKink, ConfigError


logger = logging.getLogger(__name__)

ArrayLike = Union[float, complex, np.ndarray]

#: upper end of the bracket search for kink constants
KINK_S_MAX = 1e3
#: tolerance on the kink height ``b``
KINK_XTOL = 1e-12
#: number of points of the logarithmic grid for the focusing witness
FOCUSING_GRID_POINTS = 1000


def alpha_max(d: int) -> float:
    r"""Energy critical exponent, :math:`\infty` for ``d`` up to 2 and ``4/(d-2)`` else"""
    return np.inf if d <= 2 else 4 / (d - 2)


class Nonlinearity:
    r"""
    Base class of all nonlinearity models

    :param dimension_hint: the space dimension the model is meant for
    :param alpha_mid: optional intermediate exponent :math:`\alpha_{1.5}`
                      of a perturbed power nonlinearity, carried as metadata

    Subclasses implement :py:meth:`~.g`, :py:meth:`~.dg` and :py:meth:`~.G`.
    All methods accept scalars as well as arrays.
    """
    __slots__ = ('dimension_hint', 'alpha_mid')
    #: name of the model in experiment configurations
    kind: ClassVar[str] = ''

    def __init__(self, dimension_hint: int = 1, alpha_mid: Optional[float] = None):
        if dimension_hint < 1:
            raise ParameterError('dimension_hint must be at least 1')
        self.dimension_hint = dimension_hint
        self.alpha_mid = alpha_mid

    def g(self, s: ArrayLike) -> ArrayLike:
        """The scalar function ``g`` with ``f(z) = g(|z|²) z``"""
        raise NotImplementedError

    def dg(self, s: ArrayLike) -> ArrayLike:
        """The derivative ``g′``"""
        raise NotImplementedError

    def G(self, s: ArrayLike) -> ArrayLike:
        """The primitive ``G(s) = ∫₀ˢ g``"""
        raise NotImplementedError

    @property
    def exponents(self) -> Optional[Tuple[float, float]]:
        """Growth exponents ``(α₁, α₂)`` near zero and infinity, if known"""
        return None

    def f(self, z: ArrayLike) -> ArrayLike:
        """The nonlinearity ``f(z) = g(|z|²) z``"""
        z = np.asarray(z)
        modulus_squared = z.real ** 2 + z.imag ** 2
        return self.g(modulus_squared) * z

    def f_real(self, s: ArrayLike) -> ArrayLike:
        """``f`` restricted to real arguments"""
        s = np.asarray(s, dtype=float)
        return self.g(s * s) * s

    def df_real(self, s: ArrayLike) -> ArrayLike:
        """Derivative of :py:meth:`~.f_real`, ``g(s²) + 2s²g′(s²)``"""
        s = np.asarray(s, dtype=float)
        return self.g(s * s) + 2 * s * s * self.dg(s * s)

    def F(self, s: ArrayLike) -> ArrayLike:
        """The potential ``F(s) = ∫₀ˢ f = G(s²)/2`` for ``s ≥ 0``"""
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise DomainError('F is defined for s >= 0 only, got %r' % s.min())
        return 0.5 * self.G(s * s)

    def to_config(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.to_config() == other.to_config()

    def __hash__(self):
        return hash(repr(self))

    def __repr__(self):
        parameters = {
            key: value for key, value in self.to_config().items() if key != 'kind'
        }
        return '%s(%s)' % (
            self.__class__.__name__,
            ', '.join('%s=%r' % item for item in parameters.items()),
        )


class Power(Nonlinearity):
    r"""Pure power :math:`f(z) = |z|^\alpha z`"""
    __slots__ = ('alpha',)
    kind = 'power'

    def __init__(self, alpha: float, dimension_hint: int = 1,
                 alpha_mid: Optional[float] = None):
        if not alpha > 0:
            raise ParameterError('power exponent must be positive, got %r' % alpha)
        super().__init__(dimension_hint, alpha_mid)
        self.alpha = float(alpha)

    def g(self, s):
        return np.power(s, self.alpha / 2)

    def dg(self, s):
        return (self.alpha / 2) * np.power(s, self.alpha / 2 - 1)

    def G(self, s):
        return np.power(s, self.alpha / 2 + 1) / (self.alpha / 2 + 1)

    def F(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise DomainError('F is defined for s >= 0 only, got %r' % s.min())
        return np.power(s, self.alpha + 2) / (self.alpha + 2)

    @property
    def exponents(self):
        return self.alpha, self.alpha

    def to_config(self):
        return {'kind': self.kind, 'alpha': self.alpha}


class DoublePower(Nonlinearity):
    r"""Focusing-defocusing pair :math:`f(z) = |z|^\alpha z - |z|^\beta z`"""
    __slots__ = ('alpha', 'beta')
    kind = 'double_power'

    def __init__(self, alpha: float, beta: float, dimension_hint: int = 1,
                 alpha_mid: Optional[float] = None):
        if not 0 < alpha < beta:
            raise ParameterError(
                'double power exponents need 0 < alpha < beta, got %r, %r' % (
                    alpha, beta
                )
            )
        super().__init__(dimension_hint, alpha_mid)
        self.alpha = float(alpha)
        self.beta = float(beta)

    def g(self, s):
        return np.power(s, self.alpha / 2) - np.power(s, self.beta / 2)

    def dg(self, s):
        return (
            (self.alpha / 2) * np.power(s, self.alpha / 2 - 1)
            - (self.beta / 2) * np.power(s, self.beta / 2 - 1)
        )

    def G(self, s):
        return (
            np.power(s, self.alpha / 2 + 1) / (self.alpha / 2 + 1)
            - np.power(s, self.beta / 2 + 1) / (self.beta / 2 + 1)
        )

    def F(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s < 0):
            raise DomainError('F is defined for s >= 0 only, got %r' % s.min())
        return (
            np.power(s, self.alpha + 2) / (self.alpha + 2)
            - np.power(s, self.beta + 2) / (self.beta + 2)
        )

    @property
    def exponents(self):
        return self.alpha, self.beta

    def to_config(self):
        return {'kind': self.kind, 'alpha': self.alpha, 'beta': self.beta}


class GrossPitaevskii(Nonlinearity):
    r"""
    Gross-Pitaevskii nonlinearity :math:`f(z) = (1 - |z|^2) z`

    Unlike the other models, ``g(0) = 1``; only ``f(0) = 0`` holds.
    """
    __slots__ = ()
    kind = 'gross_pitaevskii'

    def g(self, s):
        return 1 - np.asarray(s, dtype=float)

    def dg(self, s):
        return -np.ones_like(np.asarray(s, dtype=float))

    def G(self, s):
        s = np.asarray(s, dtype=float)
        return s - s * s / 2

    @property
    def exponents(self):
        return 2.0, 2.0

    def to_config(self):
        return {'kind': self.kind}


class Tabulated(Nonlinearity):
    r"""
    Nonlinearity with ``g`` given by samples on ``[0, s_max]``

    :param s: increasing sample positions, starting at ``0``
    :param g: values of ``g`` at ``s``, with ``g(0) = 0``
    :param exponents: optional declared growth exponents ``(α₁, α₂)``

    Between samples, ``g`` is interpolated by a cubic spline.
    Evaluating at ``|z|² > s_max`` raises :py:exc:`~nlslab.exceptions.DomainError`.
    """
    __slots__ = ('s', 'values', '_spline', '_exponents')
    kind = 'tabulated'

    def __init__(self, s: Sequence[float], g: Sequence[float],
                 exponents: Optional[Tuple[float, float]] = None,
                 dimension_hint: int = 1, alpha_mid: Optional[float] = None):
        super().__init__(dimension_hint, alpha_mid)
        s = np.asarray(s, dtype=float)
        g = np.asarray(g, dtype=float)
        if s.ndim != 1 or s.shape != g.shape or s.size < 4:
            raise ParameterError('tabulated g needs at least 4 matching samples')
        if s[0] != 0 or np.any(np.diff(s) <= 0):
            raise ParameterError('table positions must start at 0 and increase')
        if g[0] != 0:
            raise ParameterError('tabulated g must vanish at 0, got %r' % g[0])
        self.s = s
        self.values = g
        self._spline = CubicSpline(s, g)
        self._exponents = None if exponents is None else tuple(exponents)

    @property
    def s_max(self) -> float:
        return float(self.s[-1])

    def _checked(self, s):
        s = np.asarray(s, dtype=float)
        if np.any(s < 0) or np.any(s > self.s_max):
            raise DomainError(
                'tabulated g is known on [0, %r], got values up to %r' % (
                    self.s_max, float(np.max(s))
                )
            )
        return s

    def g(self, s):
        return self._spline(self._checked(s))

    def dg(self, s):
        return self._spline(self._checked(s), 1)

    def G(self, s):
        s = self._checked(s)

        def primitive(upper):
            value, _ = integrate.quad(
                self._spline, 0.0, upper, epsrel=1e-10, epsabs=0.0, limit=200
            )
            return value
        return np.vectorize(primitive, otypes=[float])(s)[()]

    @property
    def exponents(self):
        return self._exponents

    def to_config(self):
        config = {
            'kind': self.kind, 's': self.s.tolist(), 'g': self.values.tolist()
        }
        if self._exponents is not None:
            config['exponents'] = list(self._exponents)
        return config


# Operations
############
def _non_negative(name: str, s: ArrayLike) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError('%s is defined for s >= 0 only, got %r' % (name, s.min()))
    return s


def eval_g(nl: Nonlinearity, s: ArrayLike) -> ArrayLike:
    """Evaluate ``g(s)`` for ``s = |z|² ≥ 0``"""
    return nl.g(_non_negative('g', s))


def eval_G(nl: Nonlinearity, s: ArrayLike) -> ArrayLike:
    """Evaluate ``G(s) = ∫₀ˢ g`` for ``s ≥ 0``"""
    return nl.G(_non_negative('G', s))


def eval_f(nl: Nonlinearity, z: ArrayLike) -> ArrayLike:
    """Evaluate ``f(z) = g(|z|²) z``"""
    return nl.f(z)


def eval_F(nl: Nonlinearity, s: ArrayLike) -> ArrayLike:
    """Evaluate ``F(s) = ∫₀ˢ f(τ)dτ`` for ``s ≥ 0``"""
    return nl.F(s)


class MassRegime(NamedTuple):
    """Position of the leading exponent relative to the L²-critical ``4/d``"""
    critical_exponent: float
    regime: str


def mass_critical_regime(nl: Nonlinearity, d: int) -> Optional[MassRegime]:
    """
    Classify the leading exponent as ``subcritical``, ``critical`` or ``supercritical``

    Ground state solitons are orbitally stable in the subcritical regime and
    unstable by blow-up otherwise. Returns :py:data:`None` when ``nl`` has no
    known exponents.
    """
    exponents = nl.exponents
    if exponents is None:
        return None
    critical = 4 / d
    leading = exponents[0]
    if np.isclose(leading, critical, rtol=1e-12, atol=0):
        regime = 'critical'
    elif leading < critical:
        regime = 'subcritical'
    else:
        regime = 'supercritical'
    return MassRegime(critical, regime)


class Assumption1Report(NamedTuple):
    """Result of :py:func:`~.check_assumption1`"""
    #: ``α₁ ≤ α₂ < α_max``, or :py:data:`None` without known exponents
    subcritical: Optional[bool]
    #: whether a witness ``G(s₀) > ω s₀`` was found
    focusing: bool
    #: the smallest grid point witnessing focusing
    s0_witness: Optional[float]
    alpha_max: float
    exponents: Optional[Tuple[float, float]]
    #: whether ``g(0) = 0`` holds
    g_vanishes: bool
    mass_regime: Optional[MassRegime]
    #: optional intermediate exponent metadata
    alpha_mid: Optional[float]


def check_assumption1(nl: Nonlinearity, omega: float, d: int) -> Assumption1Report:
    """
    Check energy-subcriticality and the focusing condition for ``(nl, ω)``

    Subcriticality compares the growth exponents against ``α_max(d)``.
    Focusing searches a logarithmic grid ``s ∈ [1e-6, 1e6]`` of
    :py:data:`FOCUSING_GRID_POINTS` points for ``G(s₀) > ω s₀``;
    not finding a witness is reported, not asserted as non-existence.
    """
    if not omega > 0:
        raise ParameterError('omega must be positive, got %r' % omega)
    limit = alpha_max(d)
    exponents = nl.exponents
    subcritical = None
    if exponents is not None:
        subcritical = bool(0 < exponents[0] <= exponents[1] < limit)
    grid = np.logspace(-6, 6, FOCUSING_GRID_POINTS)
    if isinstance(nl, Tabulated):
        grid = grid[grid <= nl.s_max]
    witnesses = grid[nl.G(grid) > omega * grid]
    s0 = float(witnesses[0]) if witnesses.size else None
    if s0 is None:
        logger.debug('no focusing witness for %r at omega=%r', nl, omega)
    return Assumption1Report(
        subcritical=subcritical,
        focusing=s0 is not None,
        s0_witness=s0,
        alpha_max=limit,
        exponents=exponents,
        g_vanishes=bool(nl.g(0.0) == 0),
        mass_regime=mass_critical_regime(nl, d),
        alpha_mid=nl.alpha_mid,
    )


class KinkConstants(NamedTuple):
    """Constants ``(ω₀, b)`` of a kink, with ``h′(b)`` for ``h(s) = ω₀s − f(s)``"""
    omega0: float
    b: float
    hprime_at_b: float

    def residuals(self, nl: Nonlinearity) -> Tuple[float, float]:
        """``|h(b)|`` and ``|∫₀ᵇ h|``"""
        h_b = self.omega0 * self.b - float(nl.f_real(self.b))
        integral = self.omega0 * self.b ** 2 / 2 - float(nl.F(self.b))
        return abs(h_b), abs(integral)

    def first_integral(self, nl: Nonlinearity, s: ArrayLike) -> ArrayLike:
        """``H(s) = ∫₀ˢ h = ω₀s²/2 − F(s)``"""
        s = np.asarray(s, dtype=float)
        return self.omega0 * s * s / 2 - nl.F(s)


def _kink_balance(nl: Nonlinearity, b):
    # ∫₀ᵇ h with ω₀ eliminated through h(b) = 0, i.e. ω₀ = g(b²)
    b = np.asarray(b, dtype=float)
    return nl.g(b * b) * b * b / 2 - nl.F(b)


def kink_constants(nl: Nonlinearity, s_max: float = KINK_S_MAX) -> KinkConstants:
    """
    Solve ``h(b) = 0, ∫₀ᵇ h = 0`` for the kink constants ``(ω₀, b)``

    Eliminating ``ω₀ = g(b²)`` leaves a scalar equation in ``b``, whose
    roots are bracketed on a logarithmic grid up to ``s_max`` and refined by
    Brent's method. The first root with ``ω₀ > 0``, ``h′(b) > 0`` and a
    positive first integral on ``(0, b)`` is returned.

    :raises NoKink: if no frequency admits a plateau with vanishing first integral
    """
    upper = min(s_max, np.sqrt(nl.s_max)) if isinstance(nl, Tabulated) else s_max
    grid = np.logspace(-6, np.log10(upper), 4000)
    balance = _kink_balance(nl, grid)
    candidates = []
    for index in range(grid.size - 1):
        if balance[index] == 0:
            candidates.append(float(grid[index]))
        elif balance[index] * balance[index + 1] < 0:
            candidates.append(optimize.brentq(
                lambda b: float(_kink_balance(nl, b)),
                grid[index], grid[index + 1], xtol=KINK_XTOL, rtol=4e-16,
                maxiter=500,
            ))
    if not candidates:
        raise NoKink(nl, 'the integral of h never vanishes on (0, %g]' % upper)
    for b in candidates:
        omega0 = float(nl.g(b * b))
        hprime = omega0 - float(nl.df_real(b))
        if omega0 <= 0 or hprime <= 0:
            logger.debug('rejecting kink candidate b=%r: omega0=%r, h\'(b)=%r',
                         b, omega0, hprime)
            continue
        constants = KinkConstants(omega0, b, hprime)
        interior = np.linspace(0, b, 2002)[1:-1]
        scale = omega0 * b * b
        if np.min(constants.first_integral(nl, interior)) < -1e-12 * scale:
            logger.debug('rejecting kink candidate b=%r: H < 0 on (0, b)', b)
            continue
        logger.info('kink constants of %r: omega0=%r, b=%r', nl, omega0, b)
        return constants
    raise NoKink(nl, 'no root satisfies omega0 > 0 and h\'(b) > 0')


# Configuration
###############
_KINDS = {
    model.kind: model for model in (Power, DoublePower, GrossPitaevskii, Tabulated)
}


def nonlinearity_from_config(block: dict, path: str = 'nonlinearity') -> Nonlinearity:
    """Create a nonlinearity from its config block, e.g. ``{"kind": "power", "alpha": 2}``"""
    if not isinstance(block, dict):
        raise ConfigError(path, 'expected an object')
    try:
        model = _KINDS[block['kind']]
    except KeyError:
        raise ConfigError(
            path + '.kind', 'expected one of %s' % ', '.join(sorted(_KINDS))
        ) from None
    options = {
        key: value for key, value in block.items()
        if key in ('dimension_hint', 'alpha_mid')
    }
    try:
        if model is Power:
            return Power(float(block['alpha']), **options)
        elif model is DoublePower:
            return DoublePower(float(block['alpha']), float(block['beta']), **options)
        elif model is GrossPitaevskii:
            return GrossPitaevskii(**options)
        return Tabulated(block['s'], block['g'], block.get('exponents'), **options)
    except KeyError as err:
        raise ConfigError('%s.%s' % (path, err.args[0]), 'missing field') from None
    except (TypeError, ValueError) as err:
        raise ConfigError(path, str(err)) from None
