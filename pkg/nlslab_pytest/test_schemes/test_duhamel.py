import csv

import pytest
import numpy as np

from nlslab import Power, BackgroundW, picard_iterate, picard_consistency,\
    write_iterates_csv
from nlslab.exceptions import ParameterError

from ..utility import line, soliton, soliton_train


def separating_background():
    return BackgroundW.from_train(
        soliton_train(soliton(x0=-3.0, v=-2.0), soliton(x0=3.0, v=2.0))
    )


class TestPicard:
    def test_single_component(self):
        result = picard_iterate(
            BackgroundW([soliton()]), Power(2), 0.0, 0.5, 5, line(40.0, 256), 0.05,
        )
        assert result.converged
        assert len(result.records) == 1
        assert result.tail_bound == 0.0
        assert all(field.l2() == 0.0 for field in result.limit)

    def test_short_window_contracts(self):
        result = picard_iterate(
            separating_background(), Power(2), 0.0, 0.1, 30, line(40.0, 512), 0.005,
            tol=1e-10,
        )
        assert result.converged
        assert result.contraction_ratios
        assert max(result.contraction_ratios[1:] or result.contraction_ratios) < 0.5
        assert result.times[0] == 0.0 and result.times[-1] == pytest.approx(0.1)
        # the perturbation vanishes at the horizon
        assert result.limit.final.l2() == 0.0
        assert result.limit.initial.l2() > 0.0
        assert len(result.iterates) == len(result.records) + 1

    def test_keep_last(self):
        result = picard_iterate(
            separating_background(), Power(2), 0.0, 0.1, 4, line(40.0, 256), 0.01,
            keep_iterates=False,
        )
        assert len(result.iterates) == 2
        assert not result.converged

    def test_invalid(self):
        background = separating_background()
        grid = line(40.0, 256)
        with pytest.raises(ParameterError):
            picard_iterate(background, Power(2), 1.0, 1.0, 5, grid, 0.01)
        with pytest.raises(ParameterError):
            picard_iterate(background, Power(2), 0.0, 1.0, 5, grid, 0.0)
        with pytest.raises(ParameterError):
            picard_iterate(background, Power(2), 0.0, 1.0, 0, grid, 0.01)
        with pytest.raises(ParameterError):
            picard_iterate(background, Power(3), 0.0, 1.0, 5, grid, 0.01)

    def test_iterates_csv(self, tmp_path):
        result = picard_iterate(
            separating_background(), Power(2), 0.0, 0.1, 3, line(40.0, 256), 0.01,
        )
        path = write_iterates_csv(tmp_path / 'iterates.csv', result)
        with path.open(newline='') as stream:
            rows = list(csv.reader(stream))
        assert rows[0] == ['k', 'ratio', 'sup_l2', 'sup_h1', 'correction']
        assert [row[0] for row in rows[1:]] == ['1', '2', '3']
        assert rows[1][1] == ''
        corrections = [float(row[4]) for row in rows[1:]]
        assert corrections == [record.correction for record in result.records]
        assert float(rows[2][1]) == pytest.approx(corrections[1] / corrections[0])

    @pytest.mark.slow
    def test_consistency(self):
        consistency = picard_consistency(
            separating_background(), Power(2), 0.0, 0.1, line(40.0, 512), 0.005,
        )
        scale = max(record.sup_l2 for record in consistency.picard.records)
        assert consistency.distance <= 1e-2 * scale
