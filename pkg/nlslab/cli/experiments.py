"""
The experiments a configuration can ask for

Every runner takes an :py:class:`~.ExperimentConfig`, an
:py:class:`~.Output` and a thread budget. It writes its files through the
output and returns a JSON-serialisable summary of plain numbers and flags.
The summary is what :py:mod:`~nlslab.cli.sweep` tabulates per row.
"""
import logging
import math
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from ..exceptions import (
    ConfigError, NoKink, NoContraction, InsufficientData, DomainError,
)
from .._core.codec import save_trajectory
from .._core.grid import Grid, Field
from .._core.timeline import Trajectory
from .._concurrent.basics import settle
from .._primitives.nonlinearity import (
    Nonlinearity, DoublePower, GrossPitaevskii, check_assumption1, kink_constants,
)
from .._primitives.profiles import (
    ground_state, kink, gp_kink, stationary_residual, save_profile,
)
from .._basics.trains import (
    TrainSpec, sum_profile, validate_theorem1, validate_theorem2,
    validate_theorem3, validate_theorem4, truncate_train, train_to_config,
)
from .._basics.metrics import admissible_pairs, fit_exponential_rate, write_metrics_csv
from .._schemes.evolution import EvolutionConfig, evolve, backward_scheme
from .._schemes.perturbation import (
    BackgroundW, evolve_perturbation, nls_residual, background_residual,
)
from .._schemes.duhamel import picard_iterate, write_iterates_csv
from .config import ExperimentConfig
from .output import Output


logger = logging.getLogger(__name__)

Runner = Callable[[ExperimentConfig, Output, Optional[int]], dict]


def relative_drift(values: Sequence[float], floor: float = 0.0) -> float:
    """Largest deviation from the first value, relative to it or to ``floor``"""
    values = np.asarray(values, dtype=float)
    if values.ndim > 1:
        deviation = np.max(np.linalg.norm(values - values[0], axis=-1))
        scale = max(float(np.linalg.norm(values[0])), floor)
    else:
        deviation = np.max(np.abs(values - values[0]))
        scale = max(abs(float(values[0])), floor)
    return float(deviation / scale) if scale > 0 else float(deviation)


def _knob(scheme: dict, key: str, default=None, kind=float):
    if key not in scheme:
        if default is None:
            raise ConfigError('scheme.%s' % key, 'missing field')
        return default
    try:
        return kind(scheme[key])
    except (TypeError, ValueError):
        raise ConfigError('scheme.%s' % key, 'expected %s' % kind.__name__) from None


def _knobs(scheme: dict, key: str, default=None) -> list:
    values = scheme.get(key, default)
    if values is None:
        raise ConfigError('scheme.%s' % key, 'missing field')
    try:
        return [float(value) for value in values]
    except (TypeError, ValueError):
        raise ConfigError('scheme.%s' % key, 'expected a list of numbers') from None


# profile
#########
def run_profile(config: ExperimentConfig, output: Output,
                threads: Optional[int] = None) -> dict:
    """Build and export the ground states and the kink of a nonlinearity"""
    nl = config.nonlinearity()
    scheme = config.scheme()
    d = _knob(scheme, 'd', 1, int)
    summary = {'nonlinearity': nl.to_config(), 'ground_states': [], 'kink': None}
    if isinstance(nl, GrossPitaevskii):
        for speed in _knobs(scheme, 'speeds', [0.0]):
            profile = gp_kink(speed, Grid.regular(_knob(scheme, 'length', 80.0), 4096))
            save_profile(profile, output.path('gp_kink_c=%g.nlsp' % speed))
            summary['ground_states'].append({
                'c': speed, 'residual': stationary_residual(profile),
                'limits': [abs(profile.limit_minus_inf), abs(profile.limit_plus_inf)],
            })
        return summary
    omegas = _knobs(scheme, 'omegas', [1.0])
    assumption = check_assumption1(nl, omegas[0], d)
    summary['assumption1'] = {
        'subcritical': assumption.subcritical, 'focusing': assumption.focusing,
        's0_witness': assumption.s0_witness,
        'mass_regime': None if assumption.mass_regime is None
        else assumption.mass_regime.regime,
    }
    for omega in omegas:
        profile = ground_state(nl, omega, d)
        save_profile(profile, output.path('ground_state_omega=%g.nlsp' % omega))
        summary['ground_states'].append({
            'omega': omega, 'residual': profile.residual,
            'height': float(np.max(np.abs(profile.samples))),
            'decay_rate': profile.decay_rate_a,
        })
    try:
        constants = kink_constants(nl)
    except NoKink as err:
        logger.info('no kink exported: %s', err)
    else:
        profile = kink(nl)
        save_profile(profile, output.path('kink.nlsp'))
        summary['kink'] = {
            'omega0': constants.omega0, 'b': constants.b,
            'hprime_at_b': constants.hprime_at_b,
            'constant_residuals': list(constants.residuals(nl)),
            'residual': profile.residual,
        }
    return summary


# evolve
########
def _difference(trajectory: Trajectory, train: TrainSpec) -> Trajectory:
    return trajectory.map(
        lambda field: field - sum_profile(train, field.time, field.grid)
    )


def run_evolve(config: ExperimentConfig, output: Output,
               threads: Optional[int] = None) -> dict:
    """Evolve the profile of a train directly and record its metrics"""
    nl, grid = config.nonlinearity(), config.grid()
    train = config.train(nl, grid.d)
    scheme = config.scheme()
    t0 = _knob(scheme, 't0', 0.0)
    compare = bool(scheme.get('reference', True))

    def reference(t: float) -> Field:
        return sum_profile(train, t, grid)

    cfg = config.evolution().replace(
        observe=True, reference=reference if compare else None
    )
    trajectory = evolve(sum_profile(train, t0, grid), nl, cfg)
    difference = _difference(trajectory, train) if compare else None
    write_metrics_csv(
        output.path('metrics.csv'), trajectory,
        pairs=admissible_pairs(grid.d) if compare else (), difference=difference,
    )
    if config.block('output', {}).get('snapshots', False):
        index = save_trajectory(trajectory, output.directory / 'snapshots', 'u')
        output.path(str(index.relative_to(output.directory)))
    _, masses = trajectory.series('mass')
    _, energies = trajectory.series('energy')
    _, momenta = trajectory.series('momentum')
    summary = {
        'steps': len(trajectory), 'dt': cfg.dt, 't_end': cfg.t_end,
        'mass_drift': relative_drift(masses),
        'energy_drift': relative_drift(energies),
        'momentum_drift': relative_drift(momenta, floor=1.0),
    }
    if compare:
        _, errors = trajectory.series('l2_dist')
        summary['error'] = float(np.max(errors))
        summary['final_error'] = float(errors[-1])
    return summary


# multi_soliton_backward
########################
def _decay_fit(times: np.ndarray, values: np.ndarray, until: float):
    window = (times <= until) & (values > 0)
    try:
        return fit_exponential_rate(times[window], values[window])
    except (InsufficientData, DomainError) as err:
        logger.warning('no decay rate before t=%s: %s', until, err)
        return None


def run_multi_soliton_backward(config: ExperimentConfig, output: Output,
                               threads: Optional[int] = None) -> dict:
    """Backward approximations of a multi-soliton with rate fits and a Cauchy table"""
    nl, grid = config.nonlinearity(), config.grid()
    train = config.train(nl, grid.d)
    scheme = config.scheme()
    final_times = _knobs(scheme, 'final_times')
    T0 = _knob(scheme, 'T0', 0.0)
    margin = _knob(scheme, 'fit_margin', 2.0)
    report = validate_theorem1(train)
    result = backward_scheme(
        train, nl, final_times, T0, config.evolution(), grid, threads=threads
    )
    runs = []
    for run in result.runs:
        if run.failed:
            runs.append({'final_time': run.final_time, 'error': str(run.error)})
            continue
        times, h1 = run.distance_series('h1_dist')
        _, l2 = run.distance_series('l2_dist')
        output.csv(
            'distances_T=%g.csv' % run.final_time, ['t', 'l2_dist', 'h1_dist'],
            zip(times, l2, h1),
        )
        fit = _decay_fit(times, h1, run.final_time - margin)
        runs.append({
            'final_time': run.final_time,
            'rate': None if fit is None else fit.rate,
            'r_squared': None if fit is None else fit.r_squared,
            'distance_at_T0': float(h1[0]),
        })
    cauchy = result.cauchy_table()
    done = [run for run in result.runs if not run.failed]
    output.csv(
        'cauchy.csv', ['n', 'T_n', 'l2'],
        ((index, run.final_time, value)
         for index, (run, value) in enumerate(zip(done, cauchy), 1)),
    )
    longest = next((run for run in reversed(runs) if run.get('rate') is not None), {})
    return {
        'omega_star': report.omega_star, 'v_star': report.v_star,
        'admissible': report.admissible,
        'runs': runs,
        'rate': longest.get('rate'),
        'r_squared': longest.get('r_squared'),
        'cauchy': cauchy,
        'cauchy_decreasing': all(
            later < earlier for earlier, later in zip(cauchy, cauchy[1:])
        ),
        'failures': len(result.failures),
    }


# infinite_train_picard
#######################
def _theorem2_summary(report) -> dict:
    return {
        'uniform_bound': report.uniform_bound.constant,
        'uniform_spread': report.uniform_bound.spread,
        'integrability_partial': report.integrability_partial,
        'integrability_tail': report.integrability_tail,
        'v_star': report.v_star, 'v_sharp': report.v_sharp,
        'V_star': report.V_star, 'V_star_tail': report.V_star_tail,
        'uniform': report.uniform_bound.holds, 'integrable': report.integrable,
        'high_speeds': report.high_speeds, 'gradient_bounded': report.gradient_bounded,
        'admissible': report.admissible, 'bracket': report.bracket,
    }


def run_infinite_train_picard(config: ExperimentConfig, output: Output,
                              threads: Optional[int] = None) -> dict:
    """Validate a soliton train, truncate it and iterate the Duhamel map around it"""
    nl, grid = config.nonlinearity(), config.grid()
    train = config.train(nl, grid.d)
    scheme = config.scheme()
    alpha = train.alpha if train.alpha is not None else nl.exponents[0]
    report = validate_theorem2(
        train, alpha, _knob(scheme, 'r0', train.r0), _knob(scheme, 'a', train.a),
        alpha2=scheme.get('alpha2'),
    )
    output.json('theorem2.json', _theorem2_summary(report))
    truncated = train
    if train.infinite:
        truncated = truncate_train(train, _knob(scheme, 'eps_tail', 1e-3))
    output.json('train.json', train_to_config(truncated))
    W = BackgroundW.from_train(truncated, nl)
    t0, T_max = _knob(scheme, 't0', 0.0), _knob(scheme, 'T_max')
    summary = {
        'theorem2': _theorem2_summary(report),
        'N': truncated.N,
        'tail_bound': truncated.metadata.get('tail_bound', 0.0),
        'background_residual': background_residual(W, t0, grid),
    }
    try:
        result = picard_iterate(
            W, nl, t0, T_max, _knob(scheme, 'n_iter', 12, int), grid,
            _knob(scheme, 'dt', 0.01), tol=_knob(scheme, 'tol', 1e-10),
            keep_iterates=False, threads=threads,
        )
    except NoContraction as err:
        summary.update(contracts=False, ratios=list(err.ratios), converged=False)
        return summary
    write_iterates_csv(output.path('iterates.csv'), result)
    times, residuals = nls_residual(result.limit, nl, background=W)
    output.csv('residual.csv', ['t', 'residual'], zip(times, residuals))
    ratios = list(result.contraction_ratios)
    summary.update(
        contracts=all(ratio < 0.5 for ratio in ratios),
        ratios=ratios,
        max_ratio=max(ratios, default=0.0),
        converged=result.converged,
        horizon_tail=result.tail_bound,
        residual=float(np.max(residuals)),
        sup_h1=result.records[-1].sup_h1,
    )
    return summary


# kink_train
############
def run_kink_train(config: ExperimentConfig, output: Output,
                   threads: Optional[int] = None) -> dict:
    """Evolve the perturbation of a kink-soliton train from several start times"""
    nl, grid = config.nonlinearity(), config.grid()
    train = config.train(nl, grid.d)
    scheme = config.scheme()
    restarts = _knobs(scheme, 'restarts', [0.0])
    cfg = config.evolution().replace(observe=False)
    report = validate_theorem3(train)
    summary = {
        'theorem3': {
            'admissible': report.admissible, 'v_star': report.v_star,
            'increasing_velocities': report.increasing_velocities,
            'localized_derivatives': report.localized_derivatives,
        },
    }
    if isinstance(nl, DoublePower):
        report4 = validate_theorem4(train, nl.alpha, nl.beta)
        summary['theorem4'] = {
            'exponents_admissible': report4.exponents_admissible,
            'admissible': report4.admissible,
        }

    def activity(t0: float):
        def run():
            background = BackgroundW.from_train(train.shifted(t0), nl)
            return evolve_perturbation(grid.zeros(0.0), background, nl, cfg)
        return run

    outcomes = settle(*(activity(t0) for t0 in restarts), threads=threads)
    rows = []
    for t0, outcome in zip(restarts, outcomes):
        if outcome.failed:
            logger.warning('restart from t0=%s failed: %s', t0, outcome.error)
            rows.append({'t0': t0, 'error': str(outcome.error)})
            continue
        trajectory = outcome.value
        records = trajectory.records.values()
        output.csv(
            'eta_t0=%g.csv' % t0, ['t', 'l2', 'h1', 'gradient_l2', 'sup'],
            ((t0 + record.time, record.l2, record.h1, record.gradient_l2,
              record.sup_norm) for record in records),
        )
        rows.append({
            't0': t0,
            'sup_h1': max(record.h1 for record in records),
            'sup_gradient': max(record.gradient_l2 for record in records),
            'gradient_finite': all(
                math.isfinite(record.gradient_l2) for record in records
            ),
        })
    done = [row['sup_h1'] for row in rows if 'sup_h1' in row]
    summary.update(
        restarts=rows,
        sup_h1=max(done, default=None),
        separation_decreasing=len(done) == len(rows) and all(
            later < earlier for earlier, later in zip(done, done[1:])
        ),
    )
    return summary


RUNNERS = {
    'profile': run_profile,
    'evolve': run_evolve,
    'multi_soliton_backward': run_multi_soliton_backward,
    'infinite_train_picard': run_infinite_train_picard,
    'kink_train': run_kink_train,
}  # type: Dict[str, Runner]


def run(config: ExperimentConfig, output: Output, threads: Optional[int] = None
        ) -> dict:
    """Run the experiment of ``config``, writing its files to ``output``"""
    if config.experiment == 'verify':
        from .verify import run_verify
        return run_verify(config, output, threads)
    logger.info('running %r into %s', config, output.directory)
    return RUNNERS[config.experiment](config, output, threads)
