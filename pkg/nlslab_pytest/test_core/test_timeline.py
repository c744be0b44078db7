import pytest
import numpy as np

from nlslab import Trajectory
from nlslab._core.timeline import Timeline

from ..utility import line


class TestTimeline:
    def test_order(self):
        timeline = Timeline()
        assert not timeline
        for time in (3.0, 1.0, 2.0):
            timeline.push(time, str(time))
        assert list(timeline.times()) == [1.0, 2.0, 3.0]
        assert timeline.first() == (1.0, '1.0')
        assert timeline.last() == (3.0, '3.0')
        assert timeline.values() == ['1.0', '2.0', '3.0']

    def test_replace(self):
        timeline = Timeline()
        timeline.push(1.0, 'a')
        timeline.push(1.0, 'b')
        assert len(timeline) == 1
        assert timeline[1.0] == 'b'

    def test_nearest(self):
        timeline = Timeline()
        for time in (0.0, 1.0, 2.0):
            timeline.push(time, time)
        assert timeline.nearest(0.4)[0] == 0.0
        assert timeline.nearest(0.6)[0] == 1.0
        assert timeline.nearest(-5.0)[0] == 0.0
        assert timeline.nearest(7.0)[0] == 2.0


class Record:
    def __init__(self, mass):
        self.mass = mass


class TestTrajectory:
    def test_publish(self):
        grid = line(10.0, 16)
        trajectory = Trajectory(metadata={'dt': 0.1})
        for step in range(3):
            trajectory.publish(grid.zeros(step * 0.5), Record(float(step)))
        assert len(trajectory) == 3
        assert trajectory.initial.time == 0.0
        assert trajectory.final.time == 1.0
        assert trajectory.at(0.6).time == 0.5
        times, masses = trajectory.series('mass')
        assert list(times) == [0.0, 0.5, 1.0]
        assert list(masses) == [0.0, 1.0, 2.0]

    def test_map(self):
        grid = line(10.0, 16)
        trajectory = Trajectory.from_fields(
            [grid.zeros(0.0), grid.zeros(1.0)], blowup=None,
        )
        shifted = trajectory.map(lambda field: field.with_values(field.values + 1))
        assert shifted.metadata == {'blowup': None}
        assert np.all(shifted.final.values == 1)
        assert shifted.final.time == pytest.approx(1.0)
