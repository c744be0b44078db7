from typing import Callable, TypeVar, Sequence

import numpy as np

from nlslab import Grid, Power, WaveSpec, TrainSpec, ground_state


RT = TypeVar('RT')


def noop(*args, **kwargs):
    """Placeholder callable that does nothing for any input"""
    pass


def assertion_mode(test_case: Callable[..., RT]) -> Callable[..., RT]:
    """
    Mark a test as using the optional assertion API only available in __debug__

    .. code:: python3

        @assertion_mode
        def test_finite_fields(self):
            with pytest.raises(AssertionError):
                Field(grid, np.full(grid.shape, np.nan))

    :note: This is intended to protect *app-level* assertions.
           The ``assert`` statements of pytest are not affected by debug mode.
    """
    if __debug__:
        return test_case
    return noop


def line(length: float = 60.0, count: int = 1024) -> Grid:
    """A one-dimensional periodic box centred at the origin"""
    return Grid.regular(length, count)


def soliton(omega: float = 1.0, v: float = 0.0, x0: float = 0.0,
            gamma: float = 0.0, alpha: float = 2.0) -> WaveSpec:
    """A moving ground state of the pure power ``|u|^alpha u``"""
    return WaveSpec(ground_state(Power(alpha), omega), gamma=gamma, x0=x0, v=v)


def soliton_train(*specs: WaveSpec, alpha: float = 2.0) -> TrainSpec:
    return TrainSpec(specs, alpha=alpha)


def relative_drift(values: Sequence[float]) -> float:
    """Largest deviation from the first value relative to its magnitude"""
    values = np.asarray(values, dtype=float)
    return float(np.max(np.abs(values - values[0])) / abs(values[0]))
