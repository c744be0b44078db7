from typing import Generic, TypeVar, Tuple, List, Iterator, Optional, Sequence

import numpy as np
from sortedcontainers import SortedDict

from .grid import Field


V = TypeVar('V')


class Timeline(Generic[V]):
    """
    Values ordered by the time they belong to

    Insertion order is irrelevant; iteration always proceeds in time.
    Inserting a value at a time already present replaces the old value.
    """
    __slots__ = ('_data',)

    def __init__(self):
        self._data = SortedDict()  # type: SortedDict[float, V]

    def __bool__(self):
        return bool(self._data)

    def __len__(self):
        return len(self._data)

    def push(self, time: float, item: V):
        self._data[float(time)] = item

    def __getitem__(self, time: float) -> V:
        return self._data[float(time)]

    def __iter__(self) -> Iterator[Tuple[float, V]]:
        return iter(self._data.items())

    def first(self) -> Tuple[float, V]:
        return self._data.peekitem(0)

    def last(self) -> Tuple[float, V]:
        return self._data.peekitem(-1)

    def nearest(self, time: float) -> Tuple[float, V]:
        """The entry closest to ``time``"""
        index = self._data.bisect_left(time)
        candidates = [
            position for position in (index - 1, index)
            if 0 <= position < len(self._data)
        ]
        position = min(
            candidates, key=lambda pos: abs(self._data.peekitem(pos)[0] - time)
        )
        return self._data.peekitem(position)

    def times(self) -> np.ndarray:
        return np.fromiter(self._data.keys(), dtype=float, count=len(self._data))

    def values(self) -> List[V]:
        return list(self._data.values())

    def __repr__(self):
        if not self._data:
            return '<%s []>' % self.__class__.__name__
        return '<%s [%s .. %s], %d entries>' % (
            self.__class__.__name__, self.first()[0], self.last()[0], len(self)
        )


class Trajectory:
    r"""
    Time-indexed sequence of :py:class:`~.Field` snapshots and metric records

    :ivar snapshots: :py:class:`~.Timeline` of fields
    :ivar records: :py:class:`~.Timeline` of metric records, any type with
                   attributes named after the recorded series
    :ivar metadata: free-form annotations, e.g. a blowup time or tail bounds

    A trajectory is filled by a single producer, usually an evolution,
    via :py:meth:`~.publish`. Readers only ever see published snapshots.
    """
    __slots__ = ('snapshots', 'records', 'metadata')

    def __init__(self, metadata: Optional[dict] = None):
        self.snapshots = Timeline()  # type: Timeline[Field]
        self.records = Timeline()
        self.metadata = dict(metadata or {})

    @classmethod
    def from_fields(cls, fields: Sequence[Field], **metadata) -> 'Trajectory':
        trajectory = cls(metadata)
        for field in fields:
            trajectory.publish(field)
        return trajectory

    def publish(self, field: Field, record=None):
        """Add a snapshot and optionally its metric record"""
        self.snapshots.push(field.time, field)
        if record is not None:
            self.records.push(field.time, record)

    def __len__(self):
        return len(self.snapshots)

    def __iter__(self) -> Iterator[Field]:
        return iter(self.snapshots.values())

    def times(self) -> np.ndarray:
        return self.snapshots.times()

    def fields(self) -> List[Field]:
        return self.snapshots.values()

    @property
    def initial(self) -> Field:
        return self.snapshots.first()[1]

    @property
    def final(self) -> Field:
        return self.snapshots.last()[1]

    def at(self, time: float) -> Field:
        """The snapshot closest to ``time``"""
        return self.snapshots.nearest(time)[1]

    def series(self, name: str) -> Tuple[np.ndarray, np.ndarray]:
        """Times and values of the recorded metric ``name``"""
        times = self.records.times()
        values = np.array([getattr(record, name) for record in self.records.values()])
        return times, values

    def map(self, transform) -> 'Trajectory':
        """Apply ``transform`` to every snapshot, keeping the metadata"""
        return Trajectory.from_fields(
            [transform(field) for field in self], **self.metadata
        )

    def __repr__(self):
        return '<%s of %d snapshots%s>' % (
            self.__class__.__name__,
            len(self),
            '' if not self else ' on [%s, %s]' % (
                self.snapshots.first()[0], self.snapshots.last()[0]
            ),
        )
