r"""
Binary formats for profiles and field snapshots

All formats are little-endian and start with a four byte magic and a
``u32`` version.

``NLSP`` profile records
    magic ``NLSP``, version ``u32 = 1``, kind ``u8``, dimension ``u8``,
    frequency ``f64``, grid origin ``f64``, spacing ``f64``, count ``u64``,
    then ``count`` samples as ``f64`` (real profiles) or interleaved
    ``f64`` pairs (complex profiles, marked by the kind).

``NLSF`` field snapshots
    magic ``NLSF``, version ``u32 = 1``, dimension ``u8``, per dimension
    count ``u64`` and length ``f64``, time ``f64``, then the samples as
    interleaved ``(re, im)`` ``f64`` pairs in row-major order.

A trajectory is stored as one ``NLSF`` file per snapshot plus a JSON index
listing the files and their times.
"""
import json
import struct
from pathlib import Path
from typing import NamedTuple, Union, List

import numpy as np

from ..exceptions import DomainError
from .grid import Grid, Field
from .timeline import Trajectory


VERSION = 1
_PROFILE_HEADER = struct.Struct('<4sIBBdddQ')
_FIELD_PREFIX = struct.Struct('<4sIB')
_FIELD_AXIS = struct.Struct('<Qd')
_FIELD_TIME = struct.Struct('<d')
_REAL = np.dtype('<f8')

PathLike = Union[str, Path]


class ProfileRecord(NamedTuple):
    """Raw content of an ``NLSP`` record"""
    kind: int
    d: int
    omega: float
    origin: float
    spacing: float
    samples: np.ndarray


def _check_magic(magic: bytes, version: int, expected: bytes, source):
    if magic != expected:
        raise DomainError('%s is not a %s file (magic %r)' % (
            source, expected.decode(), magic
        ))
    if version != VERSION:
        raise DomainError('%s has unsupported version %d' % (source, version))


def encode_profile(record: ProfileRecord, complex_samples: bool) -> bytes:
    samples = np.asarray(record.samples)
    header = _PROFILE_HEADER.pack(
        b'NLSP', VERSION, record.kind, record.d, record.omega,
        record.origin, record.spacing, samples.size,
    )
    if complex_samples:
        payload = np.empty(2 * samples.size, dtype=_REAL)
        payload[0::2] = samples.real
        payload[1::2] = samples.imag
    else:
        payload = samples.astype(_REAL)
    return header + payload.tobytes()


def decode_profile(data: bytes, complex_samples_kinds=(), source='<bytes>'):
    magic, version, kind, d, omega, origin, spacing, count = \
        _PROFILE_HEADER.unpack_from(data)
    _check_magic(magic, version, b'NLSP', source)
    payload = np.frombuffer(data, dtype=_REAL, offset=_PROFILE_HEADER.size)
    if kind in complex_samples_kinds:
        samples = payload[0::2] + 1j * payload[1::2]
    else:
        samples = payload.copy()
    if samples.size != count:
        raise DomainError('%s declares %d samples but holds %d' % (
            source, count, samples.size
        ))
    return ProfileRecord(kind, d, omega, origin, spacing, samples)


def encode_field(field: Field) -> bytes:
    grid = field.grid
    parts = [_FIELD_PREFIX.pack(b'NLSF', VERSION, grid.d)]
    parts.extend(
        _FIELD_AXIS.pack(count, length)
        for count, length in zip(grid.counts, grid.lengths)
    )
    parts.append(_FIELD_TIME.pack(field.time))
    payload = np.empty(2 * grid.size, dtype=_REAL)
    flat = field.values.ravel(order='C')
    payload[0::2] = flat.real
    payload[1::2] = flat.imag
    parts.append(payload.tobytes())
    return b''.join(parts)


def decode_field(data: bytes, source='<bytes>') -> Field:
    magic, version, d = _FIELD_PREFIX.unpack_from(data)
    _check_magic(magic, version, b'NLSF', source)
    offset = _FIELD_PREFIX.size
    counts, lengths = [], []
    for _ in range(d):
        count, length = _FIELD_AXIS.unpack_from(data, offset)
        offset += _FIELD_AXIS.size
        counts.append(count)
        lengths.append(length)
    time, = _FIELD_TIME.unpack_from(data, offset)
    offset += _FIELD_TIME.size
    payload = np.frombuffer(data, dtype=_REAL, offset=offset)
    grid = Grid(lengths, counts)
    if payload.size != 2 * grid.size:
        raise DomainError('%s holds %d values for %d samples' % (
            source, payload.size // 2, grid.size
        ))
    return Field(grid, payload[0::2] + 1j * payload[1::2], time)


def save_field(field: Field, path: PathLike) -> Path:
    path = Path(path)
    path.write_bytes(encode_field(field))
    return path


def load_field(path: PathLike) -> Field:
    path = Path(path)
    return decode_field(path.read_bytes(), source=path)


def save_trajectory(trajectory: Trajectory, directory: PathLike, stem: str) -> Path:
    """Write every snapshot and a JSON index ``<stem>.json``; return the index path"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []  # type: List[dict]
    for index, field in enumerate(trajectory):
        name = '%s_%05d.nlsf' % (stem, index)
        save_field(field, directory / name)
        entries.append({'file': name, 'time': field.time})
    index_path = directory / ('%s.json' % stem)
    index_path.write_text(
        json.dumps({'format': 'NLSF', 'version': VERSION, 'snapshots': entries},
                   indent=2),
        encoding='utf-8',
    )
    return index_path


def load_trajectory(index_path: PathLike) -> Trajectory:
    index_path = Path(index_path)
    index = json.loads(index_path.read_text(encoding='utf-8'))
    return Trajectory.from_fields([
        load_field(index_path.parent / entry['file'])
        for entry in index['snapshots']
    ])
