"""
Running independent activities on a bounded number of threads

The thread budget is taken from an explicit argument, falling back to the
environment variable ``NLSLAB_THREADS`` and finally to a single thread.
Results never depend on the budget: they are always reported in the order
of the activities.
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar, List, Optional, NamedTuple, Any

from .failures import Failures


logger = logging.getLogger(__name__)

RT = TypeVar('RT')

THREADS_KEY = 'NLSLAB_THREADS'


def thread_budget(threads: Optional[int] = None) -> int:
    """
    The number of threads to use for independent activities

    :raises EnvironmentError: if ``NLSLAB_THREADS`` is not a positive integer
    """
    if threads is not None:
        if threads < 1:
            raise ValueError('thread budget must be positive, got %r' % threads)
        return threads
    try:
        threads = int(os.environ.get(THREADS_KEY, '1'))
    except ValueError:
        raise EnvironmentError(
            'Invalid %r: %r' % (THREADS_KEY, os.environ.get(THREADS_KEY))
        ) from None
    if threads < 1:
        raise EnvironmentError('Invalid %r: %r' % (THREADS_KEY, threads))
    return threads


class Outcome(NamedTuple):
    """Result of one activity: either its ``value`` or the ``error`` it raised"""
    value: Any
    error: Optional[Exception]

    @property
    def failed(self) -> bool:
        return self.error is not None


def _attempt(activity: Callable[[], RT]) -> Outcome:
    try:
        return Outcome(activity(), None)
    except Exception as err:
        logger.debug('activity %r failed: %r', activity, err)
        return Outcome(None, err)


def settle(*activities: Callable[[], RT], threads: Optional[int] = None
           ) -> List[Outcome]:
    """
    Run all ``activities`` to completion and provide their outcomes

    :param activities: callables without arguments
    :param threads: the thread budget, see :py:func:`~.thread_budget`
    :return: the :py:class:`~.Outcome` of every activity, in order

    Failing activities do not affect the others.
    """
    budget = min(thread_budget(threads), max(1, len(activities)))
    if budget == 1:
        return [_attempt(activity) for activity in activities]
    with ThreadPoolExecutor(max_workers=budget) as executor:
        return list(executor.map(_attempt, activities))


def collect(*activities: Callable[[], RT], threads: Optional[int] = None) -> List[RT]:
    """
    Run all ``activities`` concurrently to provide all results

    :param activities: callables without arguments
    :param threads: the thread budget, see :py:func:`~.thread_budget`
    :return: list of results
    :raises nlslab.Failures: if any of the ``activities`` raise an exception

    Results are always provided in the order of the ``activities``;
    the order at which individual ``activities`` finish is irrelevant.
    Every activity runs to completion even if others fail.
    """
    outcomes = settle(*activities, threads=threads)
    errors = [outcome.error for outcome in outcomes if outcome.failed]
    if errors:
        raise Failures(*errors)
    return [outcome.value for outcome in outcomes]
