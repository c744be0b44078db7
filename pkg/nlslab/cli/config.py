"""
Experiment configuration files

Configurations are JSON objects with the blocks ``experiment``, ``seed``,
``nonlinearity``, ``grid``, ``train``, ``evolution``, ``scheme`` and
``output``. Which blocks are required depends on the experiment.
Every validation error names the dotted path of the offending field.
"""
import copy
import json
import re
from pathlib import Path
from typing import Union, Any, Optional

from ..exceptions import ConfigError
from .._core.grid import Grid
from .._primitives.nonlinearity import Nonlinearity, nonlinearity_from_config
from .._basics.trains import TrainSpec, train_from_config
from .._schemes.evolution import EvolutionConfig


#: the blocks each experiment requires
EXPERIMENTS = {
    'profile': ('nonlinearity',),
    'evolve': ('nonlinearity', 'grid', 'train', 'evolution'),
    'multi_soliton_backward': ('nonlinearity', 'grid', 'train', 'evolution', 'scheme'),
    'infinite_train_picard': ('nonlinearity', 'grid', 'train', 'scheme'),
    'kink_train': ('nonlinearity', 'grid', 'train', 'evolution'),
    'verify': (),
}

DEFAULT_PATH = Path(__file__).with_name('default.json')
LITERAL_PATH = Path(__file__).with_name('literal.json')

_SEGMENT = re.compile(r'([^.\[\]]+)|\[(\d+)\]')


def grid_from_config(block: dict, path: str = 'grid') -> Grid:
    """Create a grid from ``{"length": L, "count": N, "d": 1}`` or per-axis lists"""
    if not isinstance(block, dict):
        raise ConfigError(path, 'expected an object')
    d = block.get('d', 1)
    try:
        lengths = block['lengths'] if 'lengths' in block else [block['length']] * d
        counts = block['counts'] if 'counts' in block else [block['count']] * d
    except KeyError as err:
        raise ConfigError('%s.%s' % (path, err.args[0]), 'missing field') from None
    try:
        return Grid(lengths, counts)
    except (TypeError, ValueError) as err:
        raise ConfigError(path, str(err)) from None


def _segments(path: str):
    segments = []
    for name, index in _SEGMENT.findall(path):
        segments.append(int(index) if index else name)
    if not segments:
        raise ConfigError(path, 'empty parameter path')
    return segments


class ExperimentConfig:
    """
    A validated experiment configuration

    :param raw: the decoded JSON object
    :param source: where the configuration was read from
    """
    __slots__ = ('raw', 'source')

    def __init__(self, raw: Any, source: str = '<config>'):
        if not isinstance(raw, dict):
            raise ConfigError('', 'configuration must be a JSON object')
        experiment = raw.get('experiment')
        if experiment not in EXPERIMENTS:
            raise ConfigError(
                'experiment', 'expected one of %s, got %r' % (
                    ', '.join(EXPERIMENTS), experiment
                )
            )
        for block in EXPERIMENTS[experiment]:
            if block not in raw:
                raise ConfigError(block, 'required by experiment %r' % experiment)
        if not isinstance(raw.get('seed', 0), int):
            raise ConfigError('seed', 'expected an integer')
        self.raw = raw
        self.source = source

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'ExperimentConfig':
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as err:
            raise ConfigError('', 'cannot read %s: %s' % (path, err)) from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as err:
            raise ConfigError(
                '', '%s is not valid JSON: %s (line %d)' % (path, err.msg, err.lineno)
            ) from None
        return cls(raw, str(path))

    @classmethod
    def default(cls) -> 'ExperimentConfig':
        """The bundled configuration of the acceptance suite"""
        return cls.load(DEFAULT_PATH)

    @classmethod
    def literal(cls) -> 'ExperimentConfig':
        """The acceptance suite at the literal parameters, with explicit error floors"""
        return cls.load(LITERAL_PATH)

    @property
    def experiment(self) -> str:
        return self.raw['experiment']

    @property
    def seed(self) -> int:
        return self.raw.get('seed', 0)

    def block(self, name: str, default: Optional[dict] = None) -> dict:
        try:
            block = self.raw[name]
        except KeyError:
            if default is not None:
                return default
            raise ConfigError(name, 'missing block') from None
        if not isinstance(block, dict):
            raise ConfigError(name, 'expected an object')
        return block

    def nonlinearity(self) -> Nonlinearity:
        return nonlinearity_from_config(self.block('nonlinearity'))

    def grid(self) -> Grid:
        return grid_from_config(self.block('grid'))

    def train(self, nl: Nonlinearity, d: int = 1) -> TrainSpec:
        return train_from_config(self.block('train'), nl, d)

    def evolution(self) -> EvolutionConfig:
        return EvolutionConfig.from_config(self.block('evolution'))

    def scheme(self) -> dict:
        return self.block('scheme', {})

    def output_directory(self, override: Optional[Union[str, Path]] = None) -> Path:
        if override is not None:
            return Path(override)
        return Path(self.block('output', {}).get('directory', 'nlslab-output'))

    def value(self, path: str):
        """The value at a dotted ``path`` such as ``train.family.v_sharp``"""
        current = self.raw
        for segment in _segments(path):
            try:
                current = current[segment]
            except (KeyError, IndexError, TypeError):
                raise ConfigError(path, 'does not resolve') from None
        return current

    def with_value(self, path: str, value) -> 'ExperimentConfig':
        """A copy of this configuration with the scalar at ``path`` replaced"""
        if isinstance(self.value(path), (dict, list)):
            raise ConfigError(path, 'does not resolve to a scalar')
        raw = copy.deepcopy(self.raw)
        *parents, last = _segments(path)
        current = raw
        for segment in parents:
            current = current[segment]
        current[last] = value
        return ExperimentConfig(raw, '%s[%s=%r]' % (self.source, path, value))

    def to_json(self) -> str:
        return json.dumps(self.raw, indent=2, sort_keys=True)

    def __repr__(self):
        return '<%s %s from %s>' % (
            self.__class__.__name__, self.experiment, self.source
        )
