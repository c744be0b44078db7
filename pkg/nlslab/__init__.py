"""Soliton and kink-soliton trains of nonlinear Schrödinger equations"""
from .__about__ import __version__  # noqa: F401
from .exceptions import NLSLabError, DomainError, ParameterError, GridMismatch,\
    InsufficientData, NoKink, NoGroundState, BlowupInShooting,\
    FirstIntegralNegative, SpeedAboveSound, TruncationError, NumericalBlowup,\
    BoundaryContamination, NoContraction, ConfigError, AcceptanceFailure
from ._core.grid import Grid, Field, RadialGrid
from ._core.timeline import Timeline, Trajectory
from ._core.codec import save_field, load_field, save_trajectory, load_trajectory
from ._primitives.nonlinearity import Nonlinearity, Power, DoublePower,\
    GrossPitaevskii, Tabulated, eval_f, eval_F, eval_g, eval_G,\
    check_assumption1, mass_critical_regime, kink_constants, KinkConstants,\
    nonlinearity_from_config
from ._primitives.profiles import Profile, ProfileKind, ground_state_power_1d,\
    ground_state_shoot, kink_profile, gp_kink, mirror_profile,\
    stationary_residual, scale_profile, ground_state, kink, sample_profile,\
    save_profile, load_profile
from ._primitives.waves import WaveSpec, boost, boost_soliton, boost_kink, boost_jet
from ._basics.trains import TrainSpec, TrainFamily, sum_profile,\
    validate_theorem1, validate_theorem2, validate_theorem3, validate_theorem4,\
    generate_train_params, truncate_train, train_from_config, train_to_config
from ._basics.metrics import MetricRecord, AdmissiblePair, conserved, distances,\
    admissible_pairs, strichartz_norm, fit_exponential_rate, action,\
    soliton_action, dispersive_ratio, write_metrics_csv
from ._schemes.evolution import EvolutionConfig, free_propagate, step_strang,\
    evolve, backward_scheme, time_reversal_error
from ._schemes.perturbation import BackgroundW, source_H, background_residual,\
    evolve_perturbation, nls_residual, reconstruct
from ._schemes.duhamel import picard_iterate, picard_consistency, write_iterates_csv
from ._concurrent.failures import Failures
from ._concurrent.basics import collect, settle


__all__ = [
    'NLSLabError', 'DomainError', 'ParameterError', 'GridMismatch',
    'InsufficientData', 'NoKink', 'NoGroundState', 'BlowupInShooting',
    'FirstIntegralNegative', 'SpeedAboveSound', 'TruncationError',
    'NumericalBlowup', 'BoundaryContamination', 'NoContraction', 'ConfigError',
    'AcceptanceFailure',
    'Grid', 'Field', 'RadialGrid', 'Timeline', 'Trajectory',
    'save_field', 'load_field', 'save_trajectory', 'load_trajectory',
    'Nonlinearity', 'Power', 'DoublePower', 'GrossPitaevskii', 'Tabulated',
    'eval_f', 'eval_F', 'eval_g', 'eval_G', 'check_assumption1',
    'mass_critical_regime',
    'kink_constants', 'KinkConstants', 'nonlinearity_from_config',
    'Profile', 'ProfileKind', 'ground_state_power_1d', 'ground_state_shoot',
    'kink_profile', 'gp_kink', 'mirror_profile', 'stationary_residual',
    'scale_profile', 'ground_state', 'kink', 'sample_profile',
    'save_profile', 'load_profile',
    'WaveSpec', 'boost', 'boost_soliton', 'boost_kink', 'boost_jet',
    'TrainSpec', 'TrainFamily', 'sum_profile', 'validate_theorem1',
    'validate_theorem2', 'validate_theorem3', 'validate_theorem4',
    'generate_train_params', 'truncate_train', 'train_from_config',
    'train_to_config',
    'MetricRecord', 'AdmissiblePair', 'conserved', 'distances',
    'admissible_pairs', 'strichartz_norm', 'fit_exponential_rate', 'action',
    'soliton_action', 'dispersive_ratio', 'write_metrics_csv',
    'EvolutionConfig', 'free_propagate', 'step_strang', 'evolve',
    'backward_scheme', 'time_reversal_error',
    'BackgroundW', 'source_H', 'background_residual', 'evolve_perturbation',
    'nls_residual', 'reconstruct',
    'picard_iterate', 'picard_consistency', 'write_iterates_csv',
    'Failures', 'collect', 'settle',
]
