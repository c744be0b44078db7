"""
The acceptance suite behind ``nlslab verify``

Each check measures a numerical property, records the measured values
and compares them against tolerances. Parameters come from the
``checks`` block of the configuration, one object per check; checks
missing from the block are skipped. All checks run to completion and
failures are collected before :py:func:`~.run_verify` reports them.

The bundled ``default.json`` runs every check at desk-scale parameters,
``literal.json`` (``nlslab verify --literal``) at the literal acceptance
parameters. Where a literal run measures quantities below the splitting
or roundoff error, its block names that floor explicitly
(``distance_floor``, ``cauchy_floor``, ``h1_floor``) and the floor is
recorded with the measured values.
"""
import logging
import math
from typing import Callable, Dict, List, Optional

import numpy as np

from ..exceptions import AcceptanceFailure, ConfigError, NoContraction
from .._core.grid import Grid, Field, RadialGrid
from .._concurrent.basics import settle
from .._concurrent.failures import Failures
from .._primitives.nonlinearity import Power, DoublePower, kink_constants
from .._primitives.profiles import (
    ground_state, ground_state_power_1d, ground_state_shoot, kink, gp_kink,
)
from .._primitives.waves import WaveSpec
from .._basics.trains import (
    TrainSpec, TrainFamily, sum_profile, generate_train_params, validate_theorem2,
    validate_theorem3, truncate_train,
)
from .._basics.metrics import fit_exponential_rate, write_metrics_csv
from .._schemes.evolution import (
    EvolutionConfig, evolve, backward_scheme, free_propagate, time_reversal_error,
)
from .._schemes.perturbation import BackgroundW, evolve_perturbation, nls_residual
from .._schemes.duhamel import picard_iterate, write_iterates_csv
from .config import ExperimentConfig
from .experiments import relative_drift
from .output import Output


logger = logging.getLogger(__name__)


class Check:
    """
    Measured values and violated expectations of one acceptance check

    :param name: the name of the check
    :param params: its configuration block
    """
    __slots__ = ('name', 'params', 'values', 'problems')

    def __init__(self, name: str, params: dict):
        self.name = name
        self.params = params
        self.values = {}  # type: Dict[str, object]
        self.problems = []  # type: List[str]

    def param(self, key: str, default):
        value = self.params.get(key, default)
        try:
            if isinstance(default, list):
                return [type(default[0])(item) for item in value]
            return type(default)(value)
        except (TypeError, ValueError):
            raise ConfigError('checks.%s.%s' % (self.name, key), 'expected %s' % (
                type(default).__name__
            )) from None

    def record(self, **values):
        self.values.update(values)

    def expect(self, condition: bool, message: str, *args):
        if not condition:
            self.problems.append(message % args)

    @property
    def passed(self) -> bool:
        return not self.problems

    def failure(self) -> AcceptanceFailure:
        return AcceptanceFailure(self.name, '; '.join(self.problems))

    def __repr__(self):
        return '<%s %s, %s>' % (
            self.__class__.__name__, self.name,
            'pass' if self.passed else '%d problems' % len(self.problems)
        )


def _soliton_train(nl, omegas, positions, velocities) -> TrainSpec:
    return TrainSpec(
        [
            WaveSpec(ground_state(nl, omega), x0=x0, v=v)
            for omega, x0, v in zip(omegas, positions, velocities)
        ],
        alpha=nl.exponents[0],
    )


# Exact solutions and conservation
##################################
def check_soliton_propagation(check: Check, output: Output, threads: Optional[int]):
    nl = Power(check.param('alpha', 2.0))
    grid = Grid.regular(check.param('length', 100.0), check.param('count', 4096))
    train = _soliton_train(
        nl, [check.param('omega', 1.0)], [check.param('x0', -20.0)],
        [check.param('v', 4.0)],
    )
    cfg = EvolutionConfig(
        check.param('dt', 1e-3), check.param('t_end', 10.0),
        snapshot_stride=check.param('snapshot_stride', 100),
        reference=lambda t: sum_profile(train, t, grid),
    )
    trajectory = evolve(sum_profile(train, 0.0, grid), nl, cfg)
    write_metrics_csv(output.path('soliton_propagation.csv'), trajectory)
    _, errors = trajectory.series('l2_dist')
    _, masses = trajectory.series('mass')
    _, energies = trajectory.series('energy')
    _, momenta = trajectory.series('momentum')
    check.record(
        error=float(np.max(errors)), mass=float(masses[0]),
        momentum=float(momenta[0][0]),
        mass_drift=relative_drift(masses), energy_drift=relative_drift(energies),
        momentum_drift=relative_drift(momenta, floor=1.0),
    )
    v = check.values
    check.expect(v['error'] < check.param('error_tol', 1e-5),
                 'L2 error %.3e against the boosted soliton', v['error'])
    check.expect(v['mass_drift'] < check.param('mass_tol', 1e-12),
                 'relative mass drift %.3e', v['mass_drift'])
    check.expect(v['energy_drift'] < check.param('energy_tol', 1e-5),
                 'relative energy drift %.3e', v['energy_drift'])
    check.expect(v['momentum_drift'] < check.param('momentum_tol', 1e-8),
                 'momentum drift %.3e', v['momentum_drift'])


def check_stationary_profiles(check: Check, output: Output, threads: Optional[int]):
    tolerance = check.param('residual_tol', 1e-10)
    rows = []
    for alpha in check.param('alphas', [1.0, 2.0, 3.0]):
        for omega in check.param('omegas', [0.25, 1.0, 4.0]):
            residual = ground_state(Power(alpha), omega).residual
            rows.append((alpha, omega, residual))
            check.expect(residual < tolerance,
                         'ground state residual %.3e at alpha=%g, omega=%g',
                         residual, alpha, omega)
    output.csv('ground_states.csv', ['alpha', 'omega', 'residual'], rows)
    alpha = check.param('shooting_alpha', 2.0)
    exact = ground_state_power_1d(alpha, 1.0, Grid.regular(80.0, 4096))
    shot = ground_state_shoot(Power(alpha), 1.0, 1, RadialGrid(40.0, 4001))
    radii = shot.positions()
    shooting_error = float(np.max(np.abs(shot(radii) - exact(radii))))
    check.expect(shooting_error < check.param('shooting_tol', 1e-8),
                 'shooting differs from the closed form by %.3e', shooting_error)
    nl = DoublePower(1.0, 2.0)
    constants = kink_constants(nl)
    constants_error = max(abs(constants.omega0 - 2 / 9), abs(constants.b - 2 / 3))
    kink_residual = kink(nl).residual
    check.expect(constants_error < check.param('constants_tol', 1e-10),
                 'kink constants (%r, %r) off by %.3e',
                 constants.omega0, constants.b, constants_error)
    check.expect(kink_residual < check.param('kink_tol', 1e-8),
                 'kink residual %.3e', kink_residual)
    check.record(
        worst_residual=max(row[2] for row in rows), shooting_error=shooting_error,
        omega0=constants.omega0, b=constants.b, kink_residual=kink_residual,
    )


def check_kink_rest(check: Check, output: Output, threads: Optional[int]):
    nl = DoublePower(1.0, 2.0)
    grid = Grid.regular(check.param('length', 200.0), check.param('count', 2048))
    train = TrainSpec(left_kink=WaveSpec(kink(nl)), alpha=nl.alpha)
    trajectory = evolve_perturbation(
        grid.zeros(), BackgroundW.from_train(train, nl), nl,
        EvolutionConfig(check.param('dt', 0.01), check.param('t_end', 5.0),
                        snapshot_stride=10, observe=False),
    )
    _, norms = trajectory.series('l2')
    check.record(sup_l2=float(np.max(norms)))
    check.expect(check.values['sup_l2'] < check.param('tol', 1e-8),
                 'perturbation of the resting kink grew to %.3e',
                 check.values['sup_l2'])


# Multi-soliton backward scheme
###############################
def _fit_window(times, h1, final_time, margin, floor):
    # distances at or below the floor are splitting error, not interaction
    return (times <= final_time - margin) & (h1 > floor)


def _backward_rate(train, nl, grid, final_time, cfg, margin, floor, threads):
    result = backward_scheme(train, nl, [final_time], 0.0, cfg, grid, threads=threads)
    if result.failures:
        raise result.failures[0]
    times, h1 = result.runs[0].distance_series('h1_dist')
    window = _fit_window(times, h1, final_time, margin, floor)
    return fit_exponential_rate(times[window], h1[window])


def _two_solitons(nl, speed: float, gap: float) -> TrainSpec:
    return _soliton_train(nl, [1.0, 1.0], [-gap / 2, gap / 2], [-speed / 2, speed / 2])


def check_backward_multi_soliton(check: Check, output: Output, threads: Optional[int]):
    nl = Power(2.0)
    train = _two_solitons(nl, check.param('v_star', 1.0), check.param('gap', 4.0))
    grid = Grid.regular(check.param('length', 80.0), check.param('count', 2048))
    cfg = EvolutionConfig(check.param('dt', 2e-3), 0.0,
                          snapshot_stride=check.param('snapshot_stride', 25))
    final_times = check.param('final_times', [6.0, 8.0, 10.0, 12.0])
    margin = check.param('fit_margin', 2.0)
    floor = check.param('distance_floor', 0.0)
    cauchy_floor = check.param('cauchy_floor', 0.0)
    result = backward_scheme(train, nl, final_times, 0.0, cfg, grid, threads=threads)
    for error in result.failures:
        check.expect(False, 'backward run failed: %s', error)
    if result.failures:
        return
    longest = result.runs[-1]
    times, h1 = longest.distance_series('h1_dist')
    output.csv('backward_distances.csv', ['t', 'h1_dist'], zip(times, h1))
    window = _fit_window(times, h1, longest.final_time, margin, floor)
    cauchy = result.cauchy_table()
    output.csv('cauchy.csv', ['T_n', 'l2'], zip(final_times[1:], cauchy))
    check.record(
        cauchy=cauchy, fit_points=int(np.count_nonzero(window)),
        distance_floor=floor, cauchy_floor=cauchy_floor,
    )
    check.expect(
        all(later < earlier or later <= cauchy_floor
            for earlier, later in zip(cauchy, cauchy[1:])),
        'Cauchy table is not decreasing above %.1e: %s', cauchy_floor, cauchy,
    )
    if check.values['fit_points'] < check.param('min_points', 3):
        check.expect(False, 'only %d distances above the floor %.1e',
                     check.values['fit_points'], floor)
        return
    fit = fit_exponential_rate(times[window], h1[window])
    check.record(rate=fit.rate, r_squared=fit.r_squared)
    check.expect(fit.rate > 0, 'distances grow towards T_n: rate %.3e', fit.rate)
    check.expect(fit.r_squared > check.param('r_squared', 0.9),
                 'log-linear fit has r^2 = %.3f', fit.r_squared)


def check_backward_speed_sweep(check: Check, output: Output, threads: Optional[int]):
    nl = Power(2.0)
    gap = check.param('gap', 4.0)
    grid = Grid.regular(check.param('length', 80.0), check.param('count', 2048))
    cfg = EvolutionConfig(check.param('dt', 2e-3), 0.0,
                          snapshot_stride=check.param('snapshot_stride', 25))
    final_time = check.param('final_time', 8.0)
    margin = check.param('fit_margin', 2.0)
    floor = check.param('distance_floor', 0.0)
    speeds = check.param('speeds', [0.5, 1.0, 2.0])

    def activity(speed: float):
        train = _two_solitons(nl, speed, gap)
        return lambda: _backward_rate(
            train, nl, grid, final_time, cfg, margin, floor, 1
        )

    outcomes = settle(*(activity(speed) for speed in speeds), threads=threads)
    rates = []
    for speed, outcome in zip(speeds, outcomes):
        check.expect(not outcome.failed, 'run at v*=%g failed: %s',
                     speed, outcome.error)
        rates.append(None if outcome.failed else outcome.value.rate)
    output.csv('speed_sweep.csv', ['v_star', 'rate'], zip(speeds, rates))
    check.record(rates=rates, distance_floor=floor)
    if None not in rates:
        check.expect(
            all(later > earlier for earlier, later in zip(rates, rates[1:])),
            'decay rates do not increase with the speed: %s', rates,
        )


# Soliton trains and Picard iteration
#####################################
def _picard_run(check: Check, prefix: str, defaults: dict):
    block = dict(defaults, **check.params.get(prefix, {}))
    family = TrainFamily(
        omega_ratio=float(block['omega_ratio']), omega1=float(block['omega1']),
        v_sharp=float(block['v_sharp']), N=int(block['N']),
    )
    train = generate_train_params(family, 2.0, 1)
    frame = float(block.get('frame_velocity', 0.0))
    if frame:
        # Galilean image of the family, relative speeds and L2 norms are unchanged
        train = train.replace(components=[
            spec.replace(v=(spec.v[0] + frame,) + spec.v[1:])
            for spec in train.components
        ])
    nl = Power(2.0)
    grid = Grid.regular(float(block['length']), int(block['count']))
    W = BackgroundW.from_train(train, nl)
    return W, nl, grid, block


def check_picard_train(check: Check, output: Output, threads: Optional[int]):
    family = TrainFamily(
        omega_ratio=check.param('omega_ratio', 0.25), omega1=check.param('omega1', 1.0),
        v_sharp=check.param('v_sharp', 20.0),
    )
    train = generate_train_params(family, 2.0, 1, r0=2.0, a=0.5)
    report = validate_theorem2(train, 2.0, 2.0, 0.5)
    truncated = truncate_train(train, check.param('eps_tail', 1e-3))
    check.record(
        uniform=report.uniform_bound.holds, integrable=report.integrable,
        high_speeds=report.high_speeds, gradient_bounded=report.gradient_bounded,
        N=truncated.N, tail_bound=truncated.metadata['tail_bound'],
    )
    check.expect(report.admissible, 'generated family is not admissible: %r', report)
    check.expect(truncated.N == check.param('expected_N', 24),
                 'truncation kept %d solitons', truncated.N)

    W, nl, grid, block = _picard_run(check, 'contraction', {
        'omega_ratio': 0.25, 'omega1': 0.25, 'v_sharp': 1.0, 'N': 3,
        'length': 512.0, 'count': 4096, 't0': 2.0, 'T_max': 2.2, 'dt': 5e-4,
        'n_iter': 20, 'tol': 1e-12, 'ratio_from': 1,
    })
    try:
        result = picard_iterate(
            W, nl, float(block['t0']), float(block['T_max']), int(block['n_iter']),
            grid, float(block['dt']), tol=float(block['tol']), keep_iterates=False,
            threads=threads,
        )
    except NoContraction as err:
        check.record(ratios=list(err.ratios))
        check.expect(False, 'Picard iteration on [%g, %g] does not contract: %s',
                     float(block['t0']), float(block['T_max']), list(err.ratios))
    else:
        write_iterates_csv(output.path('picard_iterates.csv'), result)
        _, residuals = nls_residual(result.limit, nl, background=W)
        # ratios[k - 1] is rho_k
        first = int(block['ratio_from'])
        ratios = list(result.contraction_ratios)
        check.record(ratios=ratios, residual=float(np.max(residuals)),
                     window=[float(block['t0']), float(block['T_max'])])
        check.expect(all(ratio < 0.5 for ratio in ratios[first - 1:]),
                     'Picard ratios from k=%d reach 1/2: %s', first, ratios)
        # null records the residual without gating on it
        limit = check.params.get('residual_tol', 1e-4)
        if limit is not None:
            check.expect(check.values['residual'] < check.param('residual_tol', 1e-4),
                         'NLS residual of the Picard limit is %.3e',
                         check.values['residual'])

    W, nl, grid, block = _picard_run(check, 'contrast', {
        'omega_ratio': 0.25, 'omega1': 1.0, 'v_sharp': 0.5, 'N': 3,
        'length': 256.0, 'count': 2048, 't0': 0.0, 'T_max': 4.0, 'dt': 0.01,
        'n_iter': 8, 'tol': 0.0,
    })
    try:
        contrast = picard_iterate(
            W, nl, float(block['t0']), float(block['T_max']), int(block['n_iter']),
            grid, float(block['dt']), keep_iterates=False, threads=threads,
        )
    except NoContraction as err:
        check.record(contrast='no contraction', contrast_ratios=list(err.ratios))
    else:
        largest = max(contrast.contraction_ratios, default=0.0)
        check.record(contrast=largest)
        check.expect(largest >= 0.9,
                     'slow train still contracts with ratios up to %.3g', largest)


def check_kink_soliton_train(check: Check, output: Output, threads: Optional[int]):
    nl = DoublePower(1.0, 2.0)
    omega = check.param('omega', 0.1)
    velocities = check.param('velocities', [4.0, 8.0, 12.0])
    positions = check.param('positions', [20.0, 40.0, 60.0])
    train = TrainSpec(
        [WaveSpec(ground_state(nl, omega), x0=x0, v=v)
         for x0, v in zip(positions, velocities)],
        left_kink=WaveSpec(kink(nl)), alpha=nl.alpha,
    )
    report = validate_theorem3(train)
    check.expect(report.admissible, 'kink train is not admissible: %r', report)
    expected = check.params.get('v_star')
    if expected is not None:
        check.expect(math.isclose(report.v_star, float(expected)),
                     'kink train has v*=%g instead of %g',
                     report.v_star, float(expected))
    grid = Grid.regular(check.param('length', 1024.0), check.param('count', 16384))
    cfg = EvolutionConfig(check.param('dt', 0.01), check.param('duration', 5.0),
                          snapshot_stride=10, observe=False)
    restarts = check.param('restarts', [0.0, 2.0, 4.0])

    def activity(t0: float):
        background = BackgroundW.from_train(train.shifted(t0), nl)
        return lambda: evolve_perturbation(grid.zeros(), background, nl, cfg)

    outcomes = settle(*(activity(t0) for t0 in restarts), threads=threads)
    peaks, rows = [], []
    for t0, outcome in zip(restarts, outcomes):
        if outcome.failed:
            check.expect(False, 'restart from t0=%g failed: %s', t0, outcome.error)
            continue
        records = outcome.value.records.values()
        peaks.append(max(record.h1 for record in records))
        rows.extend(
            (t0, t0 + record.time, record.h1, record.gradient_l2) for record in records
        )
        check.expect(
            all(math.isfinite(record.gradient_l2) for record in records),
            'gradient norm stops being finite after t0=%g', t0,
        )
    output.csv('kink_train_eta.csv', ['t0', 't', 'h1', 'gradient_l2'], rows)
    floor = check.param('h1_floor', 0.0)
    check.record(sup_h1=peaks, v_star=report.v_star, h1_floor=floor)
    check.expect(
        all(later < earlier or later <= floor
            for earlier, later in zip(peaks, peaks[1:])),
        'perturbations do not shrink with later restarts: %s', peaks,
    )


# Propagator and convergence
############################
def check_dispersion(check: Check, output: Output, threads: Optional[int]):
    grid = Grid.regular(check.param('length', 60.0), check.param('count', 2048))
    x = grid.coordinates()[0]
    gaussian = Field(grid, np.exp(-x ** 2).astype(complex))
    rows = []
    for t in check.param('times', [0.5, 1.0, 2.0, 3.0]):
        measured = free_propagate(gaussian, t).sup()
        rows.append((t, measured, (1 + 16 * t * t) ** -0.25))
    output.csv('gaussian.csv', ['t', 'sup', 'exact'], rows)
    spread = max(abs(measured - exact) for _, measured, exact in rows)
    check.expect(spread < check.param('gaussian_tol', 1e-8),
                 'Gaussian sup norm off by %.3e', spread)
    rng = np.random.default_rng(check.params.get('seed', 0))
    noise = Field(
        grid, rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    )
    unitarity = abs(free_propagate(noise, 3.0).l2() / noise.l2() - 1)
    check.expect(unitarity < check.param('unitary_tol', 1e-13),
                 'free propagation changes the L2 norm by %.3e', unitarity)
    limits = []
    for c in check.param('speeds', [0.0, 0.5, 1.0]):
        profile = gp_kink(c, Grid.regular(80.0, 4096))
        far = np.abs(profile(np.array([-1e3, 1e3])))
        limits.append(float(np.max(np.abs(far - 1))))
    check.expect(max(limits) < check.param('gp_tol', 1e-10),
                 'GP kinks miss |phi| = 1 at infinity by %.3e', max(limits))
    check.record(gaussian=spread, unitarity=unitarity, gp_limits=limits)


def check_convergence(check: Check, output: Output, threads: Optional[int]):
    nl = Power(2.0)
    grid = Grid.regular(check.param('length', 60.0), check.param('count', 1024))
    train = _soliton_train(
        nl, [1.0], [check.param('x0', -4.0)], [check.param('v', 4.0)]
    )
    t_end = check.param('t_end', 2.0)
    steps = check.param('dts', [0.02, 0.01, 0.005])
    initial = sum_profile(train, 0.0, grid)
    exact = sum_profile(train, t_end, grid)

    def activity(dt: float):
        def run():
            final = evolve(
                initial, nl, EvolutionConfig(dt, t_end, observe=False,
                                             snapshot_stride=10 ** 9)
            ).final
            return (final - exact.at_time(final.time)).l2()
        return run

    outcomes = settle(*(activity(dt) for dt in steps), threads=threads)
    for dt, outcome in zip(steps, outcomes):
        check.expect(not outcome.failed, 'run at dt=%g failed: %s', dt, outcome.error)
    if any(outcome.failed for outcome in outcomes):
        return
    errors = [outcome.value for outcome in outcomes]
    ratios = [coarse / fine for coarse, fine in zip(errors, errors[1:])]
    low, high = check.param('ratio_window', [3.5, 4.5])
    output.csv('convergence.csv', ['dt', 'error'], zip(steps, errors))
    reversal = time_reversal_error(
        initial, nl, EvolutionConfig(steps[-1], t_end, observe=False)
    )
    check.record(errors=errors, ratios=ratios, reversal=reversal)
    check.expect(all(low <= ratio <= high for ratio in ratios),
                 'error ratios per halving %s leave [%g, %g]', ratios, low, high)
    check.expect(reversal < check.param('reversal_tol', 1e-10),
                 'time reversal round trip misses by %.3e', reversal)


CHECKS = {
    'soliton_propagation': check_soliton_propagation,
    'stationary_profiles': check_stationary_profiles,
    'kink_rest': check_kink_rest,
    'backward_multi_soliton': check_backward_multi_soliton,
    'backward_speed_sweep': check_backward_speed_sweep,
    'picard_train': check_picard_train,
    'kink_soliton_train': check_kink_soliton_train,
    'dispersion': check_dispersion,
    'convergence': check_convergence,
}  # type: Dict[str, Callable[[Check, Output, Optional[int]], None]]


def run_verify(config: ExperimentConfig, output: Output,
               threads: Optional[int] = None) -> dict:
    """
    Run the configured checks and write ``verify.json``

    :return: the status and recorded values of every check
    :raises Failures: of :py:exc:`~.AcceptanceFailure` and runtime errors,
                      after all checks have run
    """
    block = config.block('checks', {})
    unknown = sorted(set(block) - set(CHECKS))
    if unknown:
        raise ConfigError('checks.%s' % unknown[0], 'unknown check')
    checks = [
        Check(name, dict(block[name], seed=config.seed))
        for name in CHECKS if name in block
    ]

    def activity(check: Check):
        def run():
            logger.info('running check %s', check.name)
            CHECKS[check.name](check, output.sub('checks'), 1)
            return check
        return run

    outcomes = settle(*(activity(check) for check in checks), threads=threads)
    summary, errors = {}, []
    for check, outcome in zip(checks, outcomes):
        if outcome.failed:
            if isinstance(outcome.error, ConfigError):
                raise outcome.error
            status = 'error'
            errors.append(outcome.error)
        elif check.passed:
            status = 'pass'
        else:
            status = 'fail'
            errors.append(check.failure())
        logger.info('check %s: %s', check.name, status)
        summary[check.name] = {
            'status': status, 'values': check.values,
            'problems': check.problems if outcome.error is None
            else [str(outcome.error)],
        }
    output.json('verify.json', summary)
    if errors:
        raise Failures(*errors)
    return summary
