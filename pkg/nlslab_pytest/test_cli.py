import csv
import json

import pytest

from nlslab.cli import main, EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_RUNTIME
from nlslab.cli.config import ExperimentConfig
from nlslab.cli.sweep import parse_values
from nlslab.exceptions import ConfigError


EVOLVE = {
    'experiment': 'evolve',
    'nonlinearity': {'kind': 'power', 'alpha': 2},
    'grid': {'length': 40.0, 'count': 256},
    'train': {'components': [{'omega': 1.0, 'x0': -4.0, 'v': 2.0}]},
    'evolution': {'dt': 0.01, 't_end': 0.5, 'snapshot_stride': 10},
}


def write_config(directory, raw, name='experiment.json'):
    path = directory / name
    path.write_text(json.dumps(raw), encoding='utf-8')
    return str(path)


def read_json(path):
    return json.loads(path.read_text(encoding='utf-8'))


class TestConfig:
    def test_missing_block(self, tmp_path):
        raw = dict(EVOLVE)
        del raw['grid']
        out = tmp_path / 'out'
        assert main(['run', write_config(tmp_path, raw), '--out', str(out), '-q']) \
            == EXIT_CONFIG
        assert not (out / 'manifest.json').exists()

    def test_unknown_experiment(self, tmp_path):
        raw = dict(EVOLVE, experiment='teleport')
        assert main(['run', write_config(tmp_path, raw), '-q']) == EXIT_CONFIG

    def test_unreadable(self, tmp_path):
        assert main(['run', str(tmp_path / 'missing.json'), '-q']) == EXIT_CONFIG

    def test_values(self):
        config = ExperimentConfig(EVOLVE)
        assert config.value('train.components[0].v') == 2.0
        changed = config.with_value('train.components[0].v', 3.0)
        assert changed.value('train.components[0].v') == 3.0
        assert config.value('train.components[0].v') == 2.0
        with pytest.raises(ConfigError):
            config.value('train.components[3].v')
        with pytest.raises(ConfigError):
            config.with_value('train', 1.0)

    def test_parse_values(self):
        assert parse_values('4, 8,16.5') == [4, 8, 16.5]
        assert parse_values('true,zero,') == [True, 'zero']

    def test_default(self):
        config = ExperimentConfig.default()
        assert config.experiment == 'verify'
        assert config.value('checks.picard_train.expected_N') == 24

    def test_literal(self):
        config = ExperimentConfig.literal()
        assert config.experiment == 'verify'
        assert config.value('checks.backward_multi_soliton.v_star') == 8
        final_times = config.value('checks.backward_multi_soliton.final_times')
        assert final_times == [6, 8, 10, 12]
        assert config.value('checks.backward_speed_sweep.speeds') == [4, 8, 16]
        assert config.value('checks.picard_train.contraction.v_sharp') == 20
        assert config.value('checks.picard_train.contraction.t0') == 0
        assert config.value('checks.picard_train.contraction.T_max') == 4
        assert config.value('checks.picard_train.contraction.ratio_from') == 2
        assert config.value('checks.kink_soliton_train.v_star') == 12
        velocities = config.value('checks.kink_soliton_train.velocities')
        assert min(b - a for a, b in zip([0.0] + velocities, velocities)) == 12


class TestRun:
    def test_evolve(self, tmp_path):
        out = tmp_path / 'out'
        assert main(['run', write_config(tmp_path, EVOLVE), '--out', str(out), '-q']) \
            == EXIT_OK
        manifest = read_json(out / 'manifest.json')
        assert manifest['status'] == 'ok'
        assert manifest['summary']['mass_drift'] < 1e-12
        assert {entry['path'] for entry in manifest['files']} == {'metrics.csv'}
        with (out / 'metrics.csv').open(newline='') as stream:
            rows = list(csv.reader(stream))
        assert rows[0][:3] == ['t', 'mass', 'energy']
        assert len(rows) == 1 + 6

    def test_deterministic(self, tmp_path):
        path = write_config(tmp_path, EVOLVE)
        for name in ('first', 'second'):
            assert main(['run', path, '--out', str(tmp_path / name), '-q']) == EXIT_OK
        assert (tmp_path / 'first' / 'metrics.csv').read_bytes() == \
            (tmp_path / 'second' / 'metrics.csv').read_bytes()

    def test_snapshots(self, tmp_path):
        raw = dict(EVOLVE, output={'snapshots': True})
        out = tmp_path / 'out'
        assert main(['run', write_config(tmp_path, raw), '--out', str(out), '-q']) \
            == EXIT_OK
        assert (out / 'snapshots' / 'u.json').exists()
        assert len(list((out / 'snapshots').glob('u_*.nlsf'))) == 6

    def test_runtime_error(self, tmp_path):
        # focusing powers have no kink
        raw = dict(EVOLVE, train={'left_kink': {'x0': 0.0}})
        out = tmp_path / 'out'
        assert main(['run', write_config(tmp_path, raw), '--out', str(out), '-q']) \
            == EXIT_RUNTIME
        assert read_json(out / 'manifest.json')['status'] == 'error'

    def test_profile(self, tmp_path):
        raw = {
            'experiment': 'profile', 'nonlinearity': {'kind': 'power', 'alpha': 2},
            'scheme': {'omegas': [1.0, 0.5]},
        }
        out = tmp_path / 'out'
        assert main(['run', write_config(tmp_path, raw), '--out', str(out), '-q']) \
            == EXIT_OK
        assert (out / 'ground_state_omega=1.nlsp').exists()
        assert (out / 'ground_state_omega=0.5.nlsp').exists()
        assert not (out / 'kink.nlsp').exists()
        summary = read_json(out / 'manifest.json')['summary']
        assert summary['assumption1']['focusing']
        assert summary['kink'] is None

    @pytest.mark.slow
    def test_kink_profile(self, tmp_path):
        raw = {
            'experiment': 'profile',
            'nonlinearity': {'kind': 'double_power', 'alpha': 1, 'beta': 2},
            'scheme': {'omegas': [0.1]},
        }
        out = tmp_path / 'out'
        assert main(['run', write_config(tmp_path, raw), '--out', str(out), '-q']) \
            == EXIT_OK
        assert (out / 'kink.nlsp').exists()
        kink = read_json(out / 'manifest.json')['summary']['kink']
        assert kink['omega0'] == pytest.approx(2 / 9)
        assert kink['b'] == pytest.approx(2 / 3)


class TestSweep:
    def test_rows(self, tmp_path):
        out = tmp_path / 'out'
        code = main([
            'sweep', write_config(tmp_path, EVOLVE), '--param', 'evolution.dt',
            '--values', '0.01,0.02', '--out', str(out), '--threads', '2', '-q',
        ])
        assert code == EXIT_OK
        with (out / 'sweep.csv').open(newline='') as stream:
            rows = list(csv.DictReader(stream))
        assert [row['evolution.dt'] for row in rows] == [
            '1.0000000000000000e-02', '2.0000000000000000e-02',
        ]
        assert all(row['status'] == 'ok' for row in rows)
        assert (out / 'row_00' / 'metrics.csv').exists()
        assert (out / 'row_01' / 'metrics.csv').exists()

    def test_failing_row(self, tmp_path):
        out = tmp_path / 'out'
        code = main([
            'sweep', write_config(tmp_path, EVOLVE), '--param', 'evolution.dt',
            '--values', '0.01,0', '--out', str(out), '-q',
        ])
        assert code == EXIT_FAILED
        with (out / 'sweep.csv').open(newline='') as stream:
            statuses = [row['status'] for row in csv.DictReader(stream)]
        assert statuses == ['ok', 'failed']

    def test_unknown_parameter(self, tmp_path):
        code = main([
            'sweep', write_config(tmp_path, EVOLVE), '--param', 'evolution.order',
            '--values', '2', '--out', str(tmp_path / 'out'), '-q',
        ])
        assert code == EXIT_CONFIG


class TestVerify:
    def test_subset(self, tmp_path):
        raw = {
            'experiment': 'verify', 'seed': 3,
            'checks': {'dispersion': {'length': 60.0, 'count': 512}},
        }
        out = tmp_path / 'out'
        assert main(['verify', write_config(tmp_path, raw), '--out', str(out), '-q']) \
            == EXIT_OK
        report = read_json(out / 'verify.json')
        assert list(report) == ['dispersion']
        assert report['dispersion']['status'] == 'pass'
        assert (out / 'checks' / 'gaussian.csv').exists()

    def test_failed_check(self, tmp_path):
        raw = {
            'experiment': 'verify',
            'checks': {'dispersion': {'count': 512, 'gaussian_tol': 0.0}},
        }
        out = tmp_path / 'out'
        assert main(['verify', write_config(tmp_path, raw), '--out', str(out), '-q']) \
            == EXIT_FAILED
        assert read_json(out / 'verify.json')['dispersion']['status'] == 'fail'
        assert read_json(out / 'manifest.json')['status'] == 'failed'

    def test_unknown_check(self, tmp_path):
        raw = {'experiment': 'verify', 'checks': {'telepathy': {}}}
        assert main(['verify', write_config(tmp_path, raw), '-q',
                     '--out', str(tmp_path / 'out')]) == EXIT_CONFIG

    def test_requires_verify(self, tmp_path):
        assert main(['verify', write_config(tmp_path, EVOLVE), '-q',
                     '--out', str(tmp_path / 'out')]) == EXIT_CONFIG

    def test_literal_excludes_config(self, tmp_path):
        raw = {'experiment': 'verify', 'checks': {}}
        assert main(['verify', write_config(tmp_path, raw), '--literal', '-q',
                     '--out', str(tmp_path / 'out')]) == EXIT_CONFIG

    def test_distance_floor(self, tmp_path):
        raw = {
            'experiment': 'verify',
            'checks': {'backward_multi_soliton': {
                'v_star': 2.0, 'gap': 0.0, 'length': 40.0, 'count': 256,
                'dt': 0.01, 'snapshot_stride': 5, 'final_times': [1.0, 1.5],
                'fit_margin': 0.0, 'distance_floor': 1e3, 'cauchy_floor': 1e3,
            }},
        }
        out = tmp_path / 'out'
        assert main(['verify', write_config(tmp_path, raw), '--out', str(out), '-q']) \
            == EXIT_FAILED
        report = read_json(out / 'verify.json')['backward_multi_soliton']
        assert report['status'] == 'fail'
        assert report['values']['fit_points'] == 0
        assert report['values']['distance_floor'] == 1e3
        assert report['problems'] == ['only 0 distances above the floor 1.0e+03']

    @pytest.mark.slow
    def test_literal_speed_sweep(self, tmp_path):
        checks = ExperimentConfig.literal().block('checks')
        raw = {
            'experiment': 'verify',
            'checks': {'backward_speed_sweep': checks['backward_speed_sweep']},
        }
        out = tmp_path / 'out'
        assert main(['verify', write_config(tmp_path, raw), '--out', str(out), '-q',
                     '--threads', '3']) == EXIT_OK
        report = read_json(out / 'verify.json')['backward_speed_sweep']
        rates = report['values']['rates']
        assert rates[0] < rates[1] < rates[2]
