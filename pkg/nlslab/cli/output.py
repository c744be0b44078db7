"""
Output directories of experiment runs

Every file of a run is written through an :py:class:`Output`, which keeps
track of them for the manifest.
"""
import csv
import json
import logging
import platform
import time
from importlib import metadata
from pathlib import Path
from typing import Union, List, Optional, Sequence, Iterable

from ..__about__ import __version__
from .._basics.metrics import format_value


logger = logging.getLogger(__name__)

#: distributions whose versions are recorded in manifests
RECORDED_PACKAGES = ('numpy', 'scipy', 'sortedcontainers', 'typing_extensions')


def package_versions() -> dict:
    versions = {'nlslab': __version__, 'python': platform.python_version()}
    for name in RECORDED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = None
    return versions


class Output:
    """
    A directory receiving the files of one run

    :param directory: where to put files, created on demand
    """
    __slots__ = ('directory', 'files', 'started')

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)
        self.files = []  # type: List[Path]
        self.started = time.monotonic()

    def path(self, name: str) -> Path:
        """Reserve the file ``name`` in the output directory"""
        path = self.directory / name
        path.parent.mkdir(parents=True, exist_ok=True)
        if path not in self.files:
            self.files.append(path)
        return path

    def json(self, name: str, payload) -> Path:
        path = self.path(name)
        path.write_text(
            json.dumps(payload, indent=2, sort_keys=True, default=_plain) + '\n',
            encoding='utf-8',
        )
        logger.info('wrote %s', path)
        return path

    def csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        """Write ``rows`` below ``header``, floats with 17 significant digits"""
        path = self.path(name)
        with path.open('w', newline='', encoding='utf-8') as stream:
            writer = csv.writer(stream)
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(value) for value in row])
        logger.info('wrote %s', path)
        return path

    def sub(self, name: str) -> 'Output':
        """An output for a subdirectory, sharing the file registry"""
        child = Output(self.directory / name)
        child.files = self.files
        child.started = self.started
        return child

    def manifest(self, config_raw: dict, status: str,
                 summary: Optional[dict] = None) -> Path:
        """Write ``manifest.json`` describing the run and all files written so far"""
        path = self.directory / 'manifest.json'
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            'config': config_raw,
            'status': status,
            'summary': summary or {},
            'versions': package_versions(),
            'wall_time': time.monotonic() - self.started,
            'files': [
                {'path': str(file.relative_to(self.directory)), 'size': file.stat().st_size}
                for file in self.files if file.exists()
            ],
        }
        path.write_text(
            json.dumps(payload, indent=2, sort_keys=True, default=_plain) + '\n',
            encoding='utf-8',
        )
        return path

    def __repr__(self):
        return '<%s %s, %d files>' % (
            self.__class__.__name__, self.directory, len(self.files)
        )


def _plain(value):
    """Convert numpy scalars and paths for JSON encoding"""
    if hasattr(value, 'tolist'):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError('cannot encode %r as JSON' % (value,))
