import pytest
import numpy as np

from nlslab import Grid, Field, Trajectory
from nlslab.exceptions import DomainError
from nlslab._core import codec


class TestFieldCodec:
    def test_plane(self, tmp_path):
        grid = Grid((4.0, 8.0), (4, 8))
        x, y = grid.coordinates()
        field = Field(grid, x + 1j * y, time=1.5)
        loaded = codec.load_field(codec.save_field(field, tmp_path / 'u.nlsf'))
        assert loaded.grid == grid
        assert loaded.time == 1.5
        assert np.array_equal(loaded.values, field.values)

    def test_bad_magic(self):
        data = bytearray(codec.encode_field(Grid.regular(4.0, 4).zeros()))
        data[:4] = b'XXXX'
        with pytest.raises(DomainError):
            codec.decode_field(bytes(data))

    def test_truncated(self):
        data = codec.encode_field(Grid.regular(4.0, 4).zeros())
        with pytest.raises(DomainError):
            codec.decode_field(data[:-16])


class TestProfileCodec:
    def test_complex_kind(self):
        record = codec.ProfileRecord(
            3, 1, 0.5, -2.0, 0.25, np.array([1 + 2j, 3 - 1j, 0.5j]),
        )
        data = codec.encode_profile(record, complex_samples=True)
        decoded = codec.decode_profile(data, complex_samples_kinds=(3,))
        assert decoded.kind == 3 and decoded.omega == 0.5
        assert np.array_equal(decoded.samples, record.samples)

    def test_bad_version(self):
        record = codec.ProfileRecord(0, 1, 1.0, 0.0, 0.1, np.zeros(4))
        data = bytearray(codec.encode_profile(record, complex_samples=False))
        data[4] = codec.VERSION + 1
        with pytest.raises(DomainError):
            codec.decode_profile(bytes(data))


class TestTrajectoryCodec:
    def test_index(self, tmp_path):
        grid = Grid.regular(4.0, 8)
        trajectory = Trajectory.from_fields([
            Field(grid, np.full(8, step), time=step * 0.25) for step in range(3)
        ])
        index = codec.save_trajectory(trajectory, tmp_path / 'snapshots', 'u')
        assert index.name == 'u.json'
        loaded = codec.load_trajectory(index)
        assert list(loaded.times()) == [0.0, 0.25, 0.5]
        assert np.all(loaded.final.values == 2)
