"""
This module defines the exceptions raised by :py:mod:`nlslab`.

Every exception derives from :py:exc:`~.NLSLabError` and, where sensible,
from the builtin exception matching its meaning. This allows to handle
failures either specifically or as plain :py:exc:`ValueError`,
:py:exc:`ArithmeticError` and friends.

Note that admissibility and assumption checks are *reports*:
an inadmissible train or a nonlinearity failing an assumption is a
regular result, not an exception.
"""
from typing import Optional, Sequence


class NLSLabError(Exception):
    """Base class for all errors raised by :py:mod:`nlslab`"""


# Parameters and domains
class DomainError(NLSLabError, ValueError):
    """An argument lies outside of the domain of an operation"""


class ParameterError(NLSLabError, ValueError):
    """A parameter violates the precondition of an operation"""


class GridMismatch(NLSLabError, ValueError):
    """Fields on different grids cannot be combined"""
    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__('fields live on different grids: %r and %r' % (left, right))


class InsufficientData(NLSLabError, ValueError):
    """A series is too short for the requested diagnostic"""
    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            'at least %d samples required, got %d' % (required, available)
        )


# Stationary problems
class NoKink(NLSLabError, ArithmeticError):
    """A nonlinearity admits no kink constants ``(ω₀, b)``"""
    def __init__(self, nonlinearity, reason: str):
        self.nonlinearity = nonlinearity
        self.reason = reason
        super().__init__('%s admits no kink: %s' % (nonlinearity, reason))


class NoGroundState(NLSLabError, ArithmeticError):
    """Shooting found no bracket for a ground state height"""
    def __init__(self, nonlinearity, omega: float, reason: str):
        self.nonlinearity = nonlinearity
        self.omega = omega
        self.reason = reason
        super().__init__(
            'no ground state bracket for %s at omega=%s: %s' % (
                nonlinearity, omega, reason
            )
        )


class BlowupInShooting(NLSLabError, ArithmeticError):
    """The shooting integrator left the admissible range of values"""
    def __init__(self, height: float, radius: float):
        self.height = height
        self.radius = radius
        super().__init__(
            'shooting from height %r blew up at radius %r' % (height, radius)
        )


class FirstIntegralNegative(NLSLabError, ArithmeticError):
    """The first integral of the kink equation turned negative"""
    def __init__(self, value: float, at: float):
        self.value = value
        self.at = at
        super().__init__(
            'first integral H(%r) = %r < 0; kink constants are inconsistent' % (
                at, value
            )
        )


class SpeedAboveSound(NLSLabError, ValueError):
    """A Gross-Pitaevskii kink was requested at or above the speed of sound"""
    def __init__(self, speed: float):
        self.speed = speed
        super().__init__(
            'kink speed |c|=%r must stay below the speed of sound sqrt(2)' % abs(speed)
        )


class TruncationError(NLSLabError, ValueError):
    """A grid is too small to contain the decay of a profile"""
    def __init__(self, boundary: float, peak: float, threshold: float):
        self.boundary = boundary
        self.peak = peak
        self.threshold = threshold
        super().__init__(
            'boundary magnitude %.3e exceeds %.1e of peak %.3e' % (
                boundary, threshold, peak
            )
        )


# Dynamics
class NumericalBlowup(NLSLabError, ArithmeticError):
    """Evolution produced non-finite or unbounded values"""
    def __init__(self, time: float, last_good: float, sup_norm: float):
        self.time = time
        self.last_good = last_good
        self.sup_norm = sup_norm
        super().__init__(
            'blowup near t=%r (last good t=%r, sup norm %r)' % (
                time, last_good, sup_norm
            )
        )


class BoundaryContamination(NLSLabError, ArithmeticError):
    """A localized unknown reached the boundary of the periodic box"""
    def __init__(self, time: float, ratio: float):
        self.time = time
        self.ratio = ratio
        super().__init__(
            'boundary amplitude reached %.3e of peak at t=%r' % (ratio, time)
        )


class NoContraction(NLSLabError, ArithmeticError):
    """A fixed point iteration failed to contract"""
    def __init__(self, ratios: Sequence[float], iterates: Optional[list] = None):
        self.ratios = tuple(ratios)
        self.iterates = iterates
        super().__init__(
            'iteration does not contract, ratios: %s' % ', '.join(
                '%.3g' % ratio for ratio in self.ratios
            )
        )


# Configuration
class ConfigError(NLSLabError, ValueError):
    """An experiment configuration is invalid"""
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__('%s: %s' % (path or '<config>', message))


class AcceptanceFailure(NLSLabError, AssertionError):
    """A numerical property checked by the acceptance suite does not hold"""
    def __init__(self, check: str, detail: str):
        self.check = check
        self.detail = detail
        super().__init__('%s: %s' % (check, detail))
