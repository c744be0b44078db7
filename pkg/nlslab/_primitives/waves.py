r"""
Moving solitons and kinks

A :py:class:`WaveSpec` sets a stationary :py:class:`~.Profile` in motion
by a Galilean boost,

.. math::

    R(t, x) = \phi(x - (c + v)t - x_0)
              e^{i(\frac{1}{2}v\cdot x - \frac{1}{4}|v|^2 t + \omega t + \gamma)}

where the intrinsic velocity ``c`` vanishes except for travelling kinks.
"""
from typing import Sequence, Tuple, Union, List, Optional

import numpy as np

from ..exceptions import ParameterError
from .profiles import Profile, ProfileKind

Points = Union[np.ndarray, Sequence[np.ndarray]]


def _as_vector(value, d: int) -> Tuple[float, ...]:
    vector = tuple(float(component) for component in np.atleast_1d(value))
    if len(vector) != d:
        raise ParameterError('expected %d components, got %r' % (d, value))
    return vector


class WaveSpec:
    r"""
    One moving component of a train

    :param profile: the stationary profile :math:`\phi`
    :param omega: frequency, matching ``profile.omega``
    :param gamma: initial phase
    :param x0: initial position, a scalar or one entry per dimension
    :param v: velocity, a scalar or one entry per dimension
    :param c: intrinsic velocity of kinks, matching the profile

    Specs are immutable; use :py:meth:`~.replace` to derive new ones.
    """
    __slots__ = ('profile', 'omega', 'gamma', 'x0', 'v', 'c')

    def __init__(self, profile: Profile, omega: Optional[float] = None,
                 gamma: float = 0.0, x0=0.0, v=0.0, c: Optional[float] = None):
        omega = profile.omega if omega is None else float(omega)
        if not np.isclose(omega, profile.omega, rtol=1e-12, atol=0):
            raise ParameterError(
                'frequency %r does not match the profile frequency %r' % (
                    omega, profile.omega
                )
            )
        c = profile.intrinsic_velocity if c is None else float(c)
        if c != profile.intrinsic_velocity:
            raise ParameterError(
                'intrinsic velocity %r does not match the profile (%r)' % (
                    c, profile.intrinsic_velocity
                )
            )
        self.profile = profile
        self.omega = omega
        self.gamma = float(gamma)
        self.x0 = _as_vector(x0, profile.d)
        self.v = _as_vector(v, profile.d)
        self.c = c

    @property
    def d(self) -> int:
        return self.profile.d

    @property
    def is_kink(self) -> bool:
        return self.profile.kind == ProfileKind.KINK

    @property
    def speed(self) -> float:
        """Magnitude of the total velocity ``c + v``"""
        return float(np.sqrt(sum(w ** 2 for w in self.velocity)))

    @property
    def velocity(self) -> Tuple[float, ...]:
        """Velocity of the modulus, ``c + v``"""
        return (self.v[0] + self.c,) + self.v[1:]

    def replace(self, **changes) -> 'WaveSpec':
        """A copy of this spec with some parameters changed"""
        parameters = {
            'profile': self.profile, 'omega': self.omega, 'gamma': self.gamma,
            'x0': self.x0, 'v': self.v, 'c': self.c,
        }
        parameters.update(changes)
        return WaveSpec(**parameters)

    def shifted(self, s: float) -> 'WaveSpec':
        """The spec whose state at time ``t`` is this spec's state at ``t + s``"""
        square_speed = sum(component ** 2 for component in self.v)
        return self.replace(
            x0=tuple(x + w * s for x, w in zip(self.x0, self.velocity)),
            gamma=self.gamma + (self.omega - square_speed / 4) * s,
        )

    def to_config(self) -> dict:
        return {
            'omega': self.omega, 'gamma': self.gamma,
            'x0': list(self.x0), 'v': list(self.v), 'c': self.c,
        }

    def __eq__(self, other):
        if not isinstance(other, WaveSpec):
            return NotImplemented
        return self.profile is other.profile and self.to_config() == other.to_config()

    def __hash__(self):
        return hash((id(self.profile), self.omega, self.gamma, self.x0, self.v))

    def __repr__(self):
        return '%s(%s, omega=%r, gamma=%r, x0=%r, v=%r%s)' % (
            self.__class__.__name__,
            self.profile.kind.name.lower(),
            self.omega, self.gamma, self.x0, self.v,
            '' if self.c == 0 else ', c=%r' % self.c,
        )


def _coordinates(x: Points, d: int) -> List[np.ndarray]:
    if d == 1 and not isinstance(x, (list, tuple)):
        return [np.asarray(x, dtype=float)]
    coordinates = [np.asarray(component, dtype=float) for component in x]
    if len(coordinates) != d:
        raise ParameterError('expected %d coordinate arrays, got %d' % (
            d, len(coordinates)
        ))
    return coordinates


def _phase(spec: WaveSpec, t: float, coordinates: List[np.ndarray]) -> np.ndarray:
    square_speed = sum(component ** 2 for component in spec.v)
    theta = (
        sum(0.5 * w * x for w, x in zip(spec.v, coordinates))
        - square_speed * t / 4 + spec.omega * t + spec.gamma
    )
    return np.exp(1j * theta)


def _displacement(spec: WaveSpec, t: float, coordinates: List[np.ndarray]):
    return [
        x - w * t - x0 for x, w, x0 in zip(coordinates, spec.velocity, spec.x0)
    ]


def boost(spec: WaveSpec, t: float, x: Points) -> np.ndarray:
    """Evaluate the moving component ``spec`` at time ``t`` and positions ``x``"""
    coordinates = _coordinates(x, spec.d)
    displacement = _displacement(spec, t, coordinates)
    if spec.d == 1 and not spec.profile.radial:
        value = spec.profile(displacement[0])
    else:
        value = spec.profile(np.sqrt(sum(xi ** 2 for xi in displacement)))
    return value * _phase(spec, t, coordinates)


def boost_soliton(spec: WaveSpec, t: float, x: Points) -> np.ndarray:
    r"""
    The soliton :math:`\phi(x - vt - x_0)e^{i(\frac{1}{2}v\cdot x - \frac{1}{4}|v|^2t + \omega t + \gamma)}`

    Samples are interpolated by cubic splines, closed forms are used when
    available, and beyond the samples the exponential tails take over.
    """
    if spec.profile.kind != ProfileKind.GROUND_STATE:
        raise ParameterError('boost_soliton requires a ground state, got %r' % spec)
    return boost(spec, t, x)


def boost_kink(spec: WaveSpec, t: float, x: Points) -> np.ndarray:
    r"""The kink :math:`\phi_K(x - (c+v)t - x_0)e^{i(\frac{1}{2}vx - \frac{1}{4}v^2t + \omega t + \gamma)}`"""
    if spec.profile.kind != ProfileKind.KINK:
        raise ParameterError('boost_kink requires a kink, got %r' % spec)
    return boost(spec, t, x)


def boost_jet(spec: WaveSpec, t: float, x: Points):
    r"""
    Value, time derivative and Laplacian of the moving component

    With :math:`\xi = x - (c+v)t - x_0` and the phase :math:`e^{i\theta}`,

    .. math::

        \partial_t R &= (-(c+v)\cdot\nabla\phi + i(\omega - |v|^2/4)\phi) e^{i\theta} \\
        \Delta R &= (\Delta\phi + i v\cdot\nabla\phi - |v|^2\phi/4) e^{i\theta}

    are evaluated analytically, never by differencing samples.
    """
    coordinates = _coordinates(x, spec.d)
    value, gradient, laplacian = spec.profile.jet(
        _displacement(spec, t, coordinates)
    )
    phase = _phase(spec, t, coordinates)
    square_speed = sum(component ** 2 for component in spec.v)
    time_derivative = (
        -sum(w * g for w, g in zip(spec.velocity, gradient))
        + 1j * (spec.omega - square_speed / 4) * value
    )
    space_laplacian = (
        laplacian + 1j * sum(w * g for w, g in zip(spec.v, gradient))
        - square_speed / 4 * value
    )
    return value * phase, time_derivative * phase, space_laplacian * phase
