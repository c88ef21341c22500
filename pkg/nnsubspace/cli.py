"""
Command-line interface: training, subspace analysis, propagation,
comparison against direct Monte Carlo, adversarial perturbation
and feature attribution, each configured by a single JSON file.

Exit codes are ``0`` on success, ``1`` on numerical failure
and ``2`` on configuration or input/output failure.
"""

import argparse as _argparse
import json as _json
import logging as _logging
import os as _os
import sys as _sys
from math import isqrt as _isqrt
from typing import (Any as _Any,
                    Callable as _Callable,
                    Dict as _Dict,
                    List as _List,
                    Optional as _Optional,
                    Sequence as _Sequence,
                    Tuple as _Tuple)

import numpy as _np
from reprit.base import generate_repr as _generate_repr

from . import (__version__ as _version,
               netcore as _netcore,
               propagate as _propagate,
               subspace as _subspace,
               surface as _surface)
from .core import io as _io
from .errors import (ConfigurationError as _ConfigurationError,
                     Error as _Error,
                     NumericalError as _NumericalError)
from .functions import NetworkScore as _NetworkScore
from .numkit import RandomSource as _RandomSource

_logger = _logging.getLogger(__name__)

SUCCESS_EXIT_CODE = 0
NUMERICAL_FAILURE_EXIT_CODE = 1
CONFIGURATION_FAILURE_EXIT_CODE = 2

BASELINE_PERCENTILE = 95.
CURVE_POINTS_COUNT = 101

_PROPAGATION_KEYS = frozenset({'alpha', 'beta', 'bins', 'degree',
                               'gap_threshold', 'mc_sample_count', 'mc_seed',
                               'r_max', 'rs_sample_count', 'score_kind',
                               'seed', 'sigma', 'workers'})
_RUN_KEYS = frozenset({'architecture', 'batch_size', 'class_index', 'dataset',
                       'epochs', 'epsilon', 'image_index', 'image_indices',
                       'learning_rate', 'output_dir', 'random_directions',
                       'rank', 'sigmas', 'test_dataset', 'train_seed',
                       'weights'})
_IDX_KEYS = frozenset({'kind', 'images', 'labels', 'downsample', 'classes'})
_SYNTHETIC_KEYS = frozenset({'kind', 'dimension', 'classes', 'count',
                             'test_count', 'seed', 'spread', 'bounds'})


class DatasetSpec:
    """
    Represents dataset source: IDX files or seeded synthetic clusters.

    Synthetic source with positive ``test_count`` generates
    ``count + test_count`` samples and holds out the tail.
    """

    __slots__ = '_kind', '_parameters'

    def __init__(self, kind: str, parameters: _Dict[str, _Any]) -> None:
        self._kind, self._parameters = kind, dict(parameters)

    __repr__ = _generate_repr(__init__)

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def parameters(self) -> _Dict[str, _Any]:
        return dict(self._parameters)

    def to_dict(self) -> _Dict[str, _Any]:
        return {**self._parameters, 'kind': self._kind}

    def load(self) -> _Tuple[_netcore.Dataset, _Optional[_netcore.Dataset]]:
        parameters = self._parameters
        if self._kind == 'idx':
            data = _netcore.load_idx(parameters['images'],
                                     parameters['labels'],
                                     classes_count=parameters['classes'])
            factor = parameters['downsample']
            if factor > 1:
                side = _isqrt(data.dimension)
                if side * side != data.dimension or side % factor:
                    raise _ConfigurationError(
                            '"downsample" factor {} does not divide '
                            'images of {} pixels.'.format(factor,
                                                          data.dimension))
                data = _netcore.downsample(data, factor)
            return data, None
        count, test_count = parameters['count'], parameters['test_count']
        data = _netcore.make_blobs(parameters['dimension'],
                                   parameters['classes'],
                                   count + test_count,
                                   parameters['seed'],
                                   spread=parameters['spread'],
                                   bounds=parameters['bounds'])
        if not test_count:
            return data, None
        return _netcore.split(data, count)


class RunConfig:
    """Represents resolved configuration of a command-line run."""

    __slots__ = ('_architecture', '_batch_size', '_class_index', '_dataset',
                 '_epochs', '_epsilon', '_image_index', '_image_indices',
                 '_learning_rate', '_output_dir', '_propagation',
                 '_random_directions', '_rank', '_sigmas', '_test_dataset',
                 '_train_seed', '_weights')

    def __init__(self,
                 weights: str,
                 dataset: DatasetSpec,
                 *,
                 propagation: _Optional[_propagate.PropagationConfig] = None,
                 test_dataset: _Optional[DatasetSpec] = None,
                 image_index: int = 0,
                 image_indices: _Optional[_Sequence[int]] = None,
                 output_dir: str = '.',
                 architecture: _Sequence[int] = (32,),
                 epochs: int = 20,
                 learning_rate: float = 0.1,
                 batch_size: int = 32,
                 train_seed: int = 0,
                 sigmas: _Optional[_Sequence[float]] = None,
                 class_index: _Optional[int] = None,
                 epsilon: _Optional[float] = None,
                 random_directions: int = 200,
                 rank: _Optional[int] = None) -> None:
        self._weights, self._dataset, self._test_dataset = (weights, dataset,
                                                            test_dataset)
        self._propagation = propagation
        self._image_index, self._image_indices = (
            image_index,
            None if image_indices is None else tuple(image_indices))
        self._output_dir = output_dir
        self._architecture = tuple(architecture)
        self._batch_size, self._epochs, self._learning_rate = (
            batch_size, epochs, learning_rate)
        self._train_seed = train_seed
        self._sigmas = None if sigmas is None else tuple(sigmas)
        self._class_index, self._epsilon = class_index, epsilon
        self._random_directions, self._rank = random_directions, rank

    __repr__ = _generate_repr(__init__)

    @property
    def architecture(self) -> _Sequence[int]:
        return self._architecture

    @property
    def batch_size(self) -> int:
        return self._batch_size

    @property
    def class_index(self) -> _Optional[int]:
        return self._class_index

    @property
    def dataset(self) -> DatasetSpec:
        return self._dataset

    @property
    def epochs(self) -> int:
        return self._epochs

    @property
    def epsilon(self) -> _Optional[float]:
        return self._epsilon

    @property
    def image_index(self) -> int:
        return self._image_index

    @property
    def image_indices(self) -> _Optional[_Sequence[int]]:
        return self._image_indices

    @property
    def learning_rate(self) -> float:
        return self._learning_rate

    @property
    def output_dir(self) -> str:
        return self._output_dir

    @property
    def propagation(self) -> _Optional[_propagate.PropagationConfig]:
        return self._propagation

    @property
    def random_directions(self) -> int:
        return self._random_directions

    @property
    def rank(self) -> _Optional[int]:
        return self._rank

    @property
    def sigmas(self) -> _Optional[_Sequence[float]]:
        return self._sigmas

    @property
    def test_dataset(self) -> _Optional[DatasetSpec]:
        return self._test_dataset

    @property
    def train_seed(self) -> int:
        return self._train_seed

    @property
    def weights(self) -> str:
        return self._weights

    def with_output_dir(self, output_dir: str) -> 'RunConfig':
        return RunConfig(self._weights, self._dataset,
                         propagation=self._propagation,
                         test_dataset=self._test_dataset,
                         image_index=self._image_index,
                         image_indices=self._image_indices,
                         output_dir=output_dir,
                         architecture=self._architecture,
                         epochs=self._epochs,
                         learning_rate=self._learning_rate,
                         batch_size=self._batch_size,
                         train_seed=self._train_seed,
                         sigmas=self._sigmas,
                         class_index=self._class_index,
                         epsilon=self._epsilon,
                         random_directions=self._random_directions,
                         rank=self._rank)

    def require_propagation(self) -> _propagate.PropagationConfig:
        if self._propagation is None:
            raise _ConfigurationError('Noise scale "sigma" is required.')
        return self._propagation

    def to_dict(self) -> _Dict[str, _Any]:
        """Returns parameters the outputs depend on."""
        return {'architecture': list(self._architecture),
                'batch_size': self._batch_size,
                'class_index': self._class_index,
                'dataset': self._dataset.to_dict(),
                'epochs': self._epochs,
                'epsilon': self._epsilon,
                'image_index': self._image_index,
                'image_indices': (None
                                  if self._image_indices is None
                                  else list(self._image_indices)),
                'learning_rate': self._learning_rate,
                'propagation': (None
                                if self._propagation is None
                                else self._propagation.to_dict()),
                'random_directions': self._random_directions,
                'rank': self._rank,
                'sigmas': (None
                           if self._sigmas is None
                           else list(self._sigmas)),
                'test_dataset': (None
                                 if self._test_dataset is None
                                 else self._test_dataset.to_dict()),
                'train_seed': self._train_seed,
                'weights': self._weights}


def load_run_config(path: str) -> RunConfig:
    """
    Reads run configuration from JSON file,
    relative paths are resolved against the file's directory.
    """
    with open(path, encoding='utf-8') as file:
        text = file.read()
    try:
        document = _json.loads(text)
    except _json.JSONDecodeError as error:
        raise _ConfigurationError('Malformed configuration {}: {} '
                                  'at line {}, column {}.'
                                  .format(path, error.msg, error.lineno,
                                          error.colno)) from None
    return parse_run_config(document,
                            _os.path.dirname(_os.path.abspath(path)))


def parse_run_config(document: _Any, base_directory: str) -> RunConfig:
    if not isinstance(document, dict):
        raise _ConfigurationError('Configuration should be JSON object.')
    _check_keys(document, _RUN_KEYS | _PROPAGATION_KEYS, 'configuration')
    if 'weights' not in document:
        raise _ConfigurationError('Weights path "weights" is required.')
    if 'dataset' not in document:
        raise _ConfigurationError('Dataset "dataset" is required.')
    sigmas = _optional_list(document, 'sigmas', _to_non_negative_float)
    if sigmas is not None and not sigmas:
        raise _ConfigurationError('"sigmas" should be non-empty.')
    propagation = _parse_propagation(document, sigmas)
    image_indices = _optional_list(document, 'image_indices', _to_index)
    architecture = _optional_list(document, 'architecture',
                                  _to_positive_int)
    return RunConfig(
            _resolve(base_directory, _to_string(document['weights'],
                                                'weights')),
            _parse_dataset(document['dataset'], base_directory),
            propagation=propagation,
            test_dataset=(None
                          if document.get('test_dataset') is None
                          else _parse_dataset(document['test_dataset'],
                                              base_directory)),
            image_index=_to_index(document.get('image_index', 0),
                                  'image_index'),
            image_indices=image_indices,
            output_dir=_resolve(base_directory,
                                _to_string(document.get('output_dir', '.'),
                                           'output_dir')),
            architecture=[32] if architecture is None else architecture,
            epochs=_to_index(document.get('epochs', 20), 'epochs'),
            learning_rate=_to_positive_float(
                    document.get('learning_rate', 0.1), 'learning_rate'),
            batch_size=_to_positive_int(document.get('batch_size', 32),
                                        'batch_size'),
            train_seed=_to_index(document.get('train_seed', 0),
                                 'train_seed'),
            sigmas=sigmas,
            class_index=(None
                         if document.get('class_index') is None
                         else _to_index(document['class_index'],
                                        'class_index')),
            epsilon=(None
                     if document.get('epsilon') is None
                     else _to_non_negative_float(document['epsilon'],
                                                 'epsilon')),
            random_directions=_to_positive_int(
                    document.get('random_directions', 200),
                    'random_directions'),
            rank=(None
                  if document.get('rank') is None
                  else _to_positive_int(document['rank'], 'rank')))


def _parse_propagation(document: _Dict[str, _Any],
                       sigmas: _Optional[_List[float]]
                       ) -> _Optional[_propagate.PropagationConfig]:
    if 'sigma' in document:
        sigma = _to_float(document['sigma'], 'sigma')
    elif sigmas is not None:
        sigma = sigmas[0]
    else:
        return None
    parameters = {key: document[key]
                  for key in _PROPAGATION_KEYS - {'sigma'}
                  if key in document}
    for key in ('alpha', 'beta', 'gap_threshold'):
        if key in parameters:
            parameters[key] = _to_float(parameters[key], key)
    for key in ('bins', 'degree', 'mc_sample_count', 'mc_seed', 'r_max',
                'rs_sample_count', 'seed', 'workers'):
        if key in parameters:
            parameters[key] = _to_int(parameters[key], key)
    return _propagate.PropagationConfig(sigma, **parameters)


def _parse_dataset(document: _Any, base_directory: str) -> DatasetSpec:
    if not isinstance(document, dict):
        raise _ConfigurationError('Dataset should be JSON object.')
    kind = document.get('kind')
    if kind == 'idx':
        _check_keys(document, _IDX_KEYS, 'idx dataset')
        parameters = {}
        for key in ('images', 'labels'):
            if key not in document:
                raise _ConfigurationError('Dataset "{}" path is required.'
                                          .format(key))
            path = _resolve(base_directory, _to_string(document[key], key))
            if not _os.path.isfile(path):
                raise _ConfigurationError('Dataset file not found: {}.'
                                          .format(path))
            parameters[key] = path
        parameters['downsample'] = _to_positive_int(
                document.get('downsample', 1), 'downsample')
        parameters['classes'] = _to_classes_count(document.get('classes', 10))
        return DatasetSpec(kind, parameters)
    elif kind == 'synthetic':
        _check_keys(document, _SYNTHETIC_KEYS, 'synthetic dataset')
        bounds = _optional_list(document, 'bounds', _to_float)
        if bounds is None:
            bounds = list(_netcore.PIXEL_BOUNDS)
        if len(bounds) != 2 or not bounds[0] < bounds[1]:
            raise _ConfigurationError('"bounds" should be increasing pair, '
                                      'but found: {}.'.format(bounds))
        return DatasetSpec(kind, {
            'dimension': _to_positive_int(document.get('dimension', 64),
                                          'dimension'),
            'classes': _to_classes_count(document.get('classes', 4)),
            'count': _to_positive_int(document.get('count', 1000), 'count'),
            'test_count': _to_index(document.get('test_count', 0),
                                    'test_count'),
            'seed': _to_index(document.get('seed', 0), 'seed'),
            'spread': _to_positive_float(document.get('spread', 0.1),
                                         'spread'),
            'bounds': tuple(bounds)})
    else:
        raise _ConfigurationError('Unknown dataset kind: {!r}.'.format(kind))


def _check_keys(document: _Dict[str, _Any],
                known: _Sequence[str],
                name: str) -> None:
    unknown = sorted(set(document) - set(known))
    if unknown:
        raise _ConfigurationError('Unknown {} keys: {}.'
                                  .format(name, ', '.join(unknown)))


def _resolve(base_directory: str, path: str) -> str:
    return _os.path.normpath(_os.path.join(base_directory,
                                           _os.path.expanduser(path)))


def _optional_list(document: _Dict[str, _Any],
                   key: str,
                   converter: _Callable[[_Any, str], _Any]
                   ) -> _Optional[_List[_Any]]:
    value = document.get(key)
    if value is None:
        return None
    if not isinstance(value, list):
        raise _ConfigurationError('"{}" should be a list, but found: {!r}.'
                                  .format(key, value))
    return [converter(element, key) for element in value]


def _to_string(value: _Any, key: str) -> str:
    if not isinstance(value, str):
        raise _ConfigurationError('"{}" should be a string, but found: {!r}.'
                                  .format(key, value))
    return value


def _to_int(value: _Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _ConfigurationError('"{}" should be an integer, '
                                  'but found: {!r}.'.format(key, value))
    return value


def _to_index(value: _Any, key: str) -> int:
    value = _to_int(value, key)
    if value < 0:
        raise _ConfigurationError('"{}" should be non-negative, '
                                  'but found: {}.'.format(key, value))
    return value


def _to_positive_int(value: _Any, key: str) -> int:
    value = _to_int(value, key)
    if value < 1:
        raise _ConfigurationError('"{}" should be positive, '
                                  'but found: {}.'.format(key, value))
    return value


def _to_classes_count(value: _Any) -> int:
    value = _to_int(value, 'classes')
    if value < 2:
        raise _ConfigurationError('"classes" should be at least 2, '
                                  'but found: {}.'.format(value))
    return value


def _to_float(value: _Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _ConfigurationError('"{}" should be a number, '
                                  'but found: {!r}.'.format(key, value))
    return float(value)


def _to_non_negative_float(value: _Any, key: str) -> float:
    value = _to_float(value, key)
    if not value >= 0.:
        raise _ConfigurationError('"{}" should be non-negative, '
                                  'but found: {}.'.format(key, value))
    return value


def _to_positive_float(value: _Any, key: str) -> float:
    value = _to_float(value, key)
    if not value > 0.:
        raise _ConfigurationError('"{}" should be positive, '
                                  'but found: {}.'.format(key, value))
    return value


def cmd_train(config_path: str, *, out: _Optional[str] = None) -> int:
    """
    Trains network on the configured dataset, writes its weights
    and prints train and test accuracies as JSON to standard output.
    """
    return _execute(_train, config_path, out)


def cmd_analyze(config_path: str, *, out: _Optional[str] = None) -> int:
    """
    Runs propagation workflow for the configured image
    and writes spectrum, summary, surface, histogram and report files,
    one sub-directory per noise scale when ``sigmas`` are configured.
    """
    return _execute(_analyze, config_path, out)


def cmd_compare(config_path: str, *, out: _Optional[str] = None) -> int:
    """
    Runs propagation workflow and direct Monte Carlo
    with independent seeds for each configured image.
    """
    return _execute(_compare, config_path, out)


def cmd_adversarial(config_path: str, *, out: _Optional[str] = None) -> int:
    """
    Perturbs the configured image along the first active direction
    and compares the score change against random directions.
    """
    return _execute(_adversarial, config_path, out)


def cmd_attribute(config_path: str, *, out: _Optional[str] = None) -> int:
    """Writes activity score of each input feature."""
    return _execute(_attribute, config_path, out)


def _execute(command: _Callable[[RunConfig], None],
             config_path: str,
             out: _Optional[str]) -> int:
    try:
        config = load_run_config(config_path)
        if out is not None:
            config = config.with_output_dir(_os.path.abspath(out))
        command(config)
    except _NumericalError as error:
        _logger.error('%s', error)
        return NUMERICAL_FAILURE_EXIT_CODE
    except (_Error, OSError, ValueError) as error:
        _logger.error('%s', error)
        return CONFIGURATION_FAILURE_EXIT_CODE
    return SUCCESS_EXIT_CODE


def _train(config: RunConfig) -> None:
    data, held_out = config.dataset.load()
    if config.test_dataset is not None:
        held_out, _ = config.test_dataset.load()
    if held_out is not None and held_out.dimension != data.dimension:
        raise _ConfigurationError('Test dataset has {} features, '
                                  'but training one has {}.'
                                  .format(held_out.dimension, data.dimension))
    result = _netcore.train_sgd(data, config.architecture, config.epochs,
                                config.learning_rate, config.train_seed,
                                batch_size=config.batch_size)
    _netcore.save_weights(result.network, config.weights)
    _logger.info('weights written to %s', config.weights)
    print(_json.dumps(
            {'epochs': config.epochs,
             'final_loss': (_io.to_number(result.losses[-1])
                            if result.losses
                            else None),
             'test_accuracy': (None
                               if held_out is None or not len(held_out)
                               else _netcore.accuracy(result.network,
                                                      held_out)),
             'train_accuracy': result.accuracy},
            sort_keys=True))


def _load_analysis_inputs(config: RunConfig
                          ) -> _Tuple[_netcore.DenseNetwork,
                                      _netcore.Dataset]:
    network = _netcore.load_weights(config.weights)
    data, held_out = config.dataset.load()
    if config.test_dataset is not None:
        data, _ = config.test_dataset.load()
    elif held_out is not None:
        data = held_out
    if data.dimension != network.input_dim:
        raise _ConfigurationError('Network expects {} features, '
                                  'but dataset has {}.'
                                  .format(network.input_dim, data.dimension))
    return network, data


def _select(network: _netcore.DenseNetwork,
            data: _netcore.Dataset,
            config: RunConfig,
            image_index: int
            ) -> _Tuple[_NetworkScore, _subspace.NoiseModel]:
    propagation = config.require_propagation()
    if image_index >= len(data):
        raise _ConfigurationError('Image index {} is out of range '
                                  'for {} images.'.format(image_index,
                                                          len(data)))
    center = data.inputs[image_index]
    class_index = (network.predict(center)
                   if config.class_index is None
                   else config.class_index)
    if class_index >= network.output_dim:
        raise _ConfigurationError('Class index {} is out of range '
                                  'for {} classes.'
                                  .format(class_index, network.output_dim))
    return (_NetworkScore(network,
                          _netcore.QoISpec(class_index,
                                           propagation.score_kind)),
            _subspace.NoiseModel(center, propagation.sigma, data.bounds))


def _image_metadata(function: _NetworkScore,
                    image_index: int) -> _Dict[str, _Any]:
    return {'class_index': function.spec.class_index,
            'dimension': function.dimension,
            'image_index': image_index,
            'score_kind': function.spec.score_kind.value}


def _make_directory(path: str) -> str:
    _os.makedirs(path,
                 exist_ok=True)
    if not _os.access(path, _os.W_OK):
        raise PermissionError('Output directory is not writable: {}.'
                              .format(path))
    return path


def _analyze(config: RunConfig) -> None:
    network, data = _load_analysis_inputs(config)
    function, noise_model = _select(network, data, config,
                                    config.image_index)
    propagation = config.require_propagation()
    metadata = {**_image_metadata(function, config.image_index),
                'run': config.to_dict()}
    output_dir = _make_directory(config.output_dir)
    if config.sigmas is None:
        report = _propagate.run_workflow(function, noise_model, propagation)
        _write_analysis(report, output_dir, metadata)
        return
    reports = _propagate.sweep(function, noise_model, propagation,
                               config.sigmas)
    entries = []
    for sigma, report in zip(config.sigmas, reports):
        _write_analysis(report,
                        _make_directory(_os.path.join(
                                output_dir, 'sigma-{:g}'.format(sigma))),
                        {**metadata, 'sigma': sigma})
        entries.append({'sigma': sigma,
                        'rank': (None
                                 if report.subspace is None
                                 else report.subspace.rank),
                        'low_confidence': report.low_confidence,
                        'mean': report.rs_stats.mean,
                        'std': report.rs_stats.std,
                        'skewness': report.rs_stats.skewness,
                        'kurtosis': report.rs_stats.kurtosis})
    _io.write_json(_os.path.join(output_dir, 'sweep.json'),
                   {**metadata, 'sweep': entries, 'version': _version})


def _write_analysis(report: _propagate.PropagationReport,
                    directory: str,
                    metadata: _Dict[str, _Any]) -> None:
    _propagate.write_histogram_csv(report.rs_stats,
                                   _os.path.join(directory, 'histogram.csv'))
    if not report.is_degenerate:
        spectrum, subspace, samples = (report.spectrum, report.subspace,
                                       report.samples)
        _subspace.write_spectrum_csv(spectrum,
                                     _os.path.join(directory, 'spectrum.csv'))
        _subspace.write_eigenvectors_csv(
                spectrum, _os.path.join(directory, 'eigenvectors.csv'))
        _subspace.write_summary_csv(samples, subspace,
                                    _os.path.join(directory, 'summary.csv'))
        _surface.write_surface_json(report.surface,
                                    _os.path.join(directory, 'surface.json'))
        first_active_variables = _subspace.project(subspace,
                                                   samples.noises)[:, 0]
        _surface.write_curve_csv(report.surface,
                                 float(first_active_variables.min()),
                                 float(first_active_variables.max()),
                                 _os.path.join(directory, 'curve.csv'),
                                 CURVE_POINTS_COUNT)
    _propagate.write_report_json(report,
                                 _os.path.join(directory, 'report.json'),
                                 **metadata)


def _compare(config: RunConfig) -> None:
    propagation = config.require_propagation()
    if propagation.seed == propagation.mc_seed:
        _logger.warning('seed collision: response surface and direct '
                        'Monte Carlo would share seed %d', propagation.seed)
        raise _ConfigurationError('"seed" and "mc_seed" should differ.')
    network, data = _load_analysis_inputs(config)
    output_dir = _make_directory(config.output_dir)
    images_indices = (config.image_indices
                      if config.image_indices is not None
                      else [config.image_index])
    entries = []
    for image_index in images_indices:
        function, noise_model = _select(network, data, config, image_index)
        report = _propagate.run_comparison(function, noise_model,
                                           propagation)
        entries.append({**_image_metadata(function, image_index),
                        'rank': (None
                                 if report.subspace is None
                                 else report.subspace.rank),
                        'low_confidence': report.low_confidence,
                        'rs': report.rs_stats.to_dict(),
                        'mc': report.mc_stats.to_dict(),
                        'comparison': report.comparison.to_dict()})
    _io.write_json(_os.path.join(output_dir, 'compare.json'),
                   {'config': propagation.to_dict(),
                    'images': entries,
                    'run': config.to_dict(),
                    'version': _version})


def _adversarial(config: RunConfig) -> None:
    if config.epsilon is None:
        raise _ConfigurationError('Perturbation budget "epsilon" '
                                  'is required.')
    propagation = config.require_propagation()
    network, data = _load_analysis_inputs(config)
    function, noise_model = _select(network, data, config,
                                    config.image_index)
    output_dir = _make_directory(config.output_dir)
    source = _RandomSource(propagation.seed)
    _, _, active_subspace = _propagate.identify(function, noise_model,
                                                propagation, source)
    perturbation = _subspace.adversarial_perturb(function, noise_model,
                                                 active_subspace,
                                                 config.epsilon)
    changes = _subspace.random_direction_changes(
            function, noise_model, config.epsilon, config.random_directions,
            source.spawn(2))
    baseline = float(_np.percentile(changes, BASELINE_PERCENTILE))
    change = abs(perturbation.score_after - perturbation.score_before)
    for name, values in [('original.csv', noise_model.center),
                         ('perturbed.csv', perturbation.perturbed)]:
        _io.write_csv(_os.path.join(output_dir, name),
                      ['feature_index', 'value'],
                      [_np.arange(len(values)), values],
                      [_io.INDEX_FORMAT, _io.FLOAT_FORMAT])
    _io.write_json(_os.path.join(output_dir, 'adversarial.json'),
                   {**_image_metadata(function, config.image_index),
                    'baseline_percentile': BASELINE_PERCENTILE,
                    'baseline_change': baseline,
                    'change': change,
                    'epsilon': perturbation.epsilon,
                    'exceeds_baseline': change > baseline,
                    'random_directions': config.random_directions,
                    'rank': active_subspace.rank,
                    'run': config.to_dict(),
                    'score_after': perturbation.score_after,
                    'score_before': perturbation.score_before,
                    'sign': perturbation.sign,
                    'version': _version})


def _attribute(config: RunConfig) -> None:
    propagation = config.require_propagation()
    network, data = _load_analysis_inputs(config)
    function, noise_model = _select(network, data, config,
                                    config.image_index)
    if config.rank is not None and config.rank > function.dimension:
        raise _ConfigurationError('Rank {} exceeds dimension {}.'
                                  .format(config.rank, function.dimension))
    output_dir = _make_directory(config.output_dir)
    _, spectrum, active_subspace = _propagate.identify(
            function, noise_model, propagation,
            _RandomSource(propagation.seed))
    rank = active_subspace.rank if config.rank is None else config.rank
    scores = _subspace.attribution(spectrum, rank)
    _io.write_csv(_os.path.join(output_dir, 'attribution.csv'),
                  ['feature_index', 'score'],
                  [_np.arange(len(scores)), scores],
                  [_io.INDEX_FORMAT, _io.FLOAT_FORMAT])
    _io.write_json(_os.path.join(output_dir, 'attribution.json'),
                   {**_image_metadata(function, config.image_index),
                    'eigenvalues_sum': _subspace.activity_total(spectrum,
                                                                rank),
                    'has_gap': active_subspace.has_gap,
                    'rank': rank,
                    'run': config.to_dict(),
                    'scores_sum': float(_np.sum(scores)),
                    'version': _version})


_COMMANDS = {'train': cmd_train,
             'analyze': cmd_analyze,
             'compare': cmd_compare,
             'adversarial': cmd_adversarial,
             'attribute': cmd_attribute}


def to_parser() -> _argparse.ArgumentParser:
    parser = _argparse.ArgumentParser(prog='nnsubspace',
                                      description=__doc__.split('\n\n')[0])
    parser.add_argument('--version',
                        action='version',
                        version='%(prog)s ' + _version)
    parser.add_argument('command',
                        choices=list(_COMMANDS))
    parser.add_argument('--config',
                        required=True,
                        help='path to JSON run configuration')
    parser.add_argument('--out',
                        default=None,
                        help='output directory overriding configured one')
    parser.add_argument('-v', '--verbose',
                        action='count',
                        default=0,
                        help='increase logging verbosity, repeatable')
    return parser


def main(argv: _Optional[_Sequence[str]] = None) -> int:
    parser = to_parser()
    try:
        arguments = parser.parse_args(argv)
    except SystemExit as exit_:
        return (SUCCESS_EXIT_CODE
                if exit_.code == 0
                else CONFIGURATION_FAILURE_EXIT_CODE)
    _logging.basicConfig(
            format='%(levelname)s %(name)s: %(message)s',
            level=(_logging.WARNING,
                   _logging.INFO,
                   _logging.DEBUG)[min(arguments.verbose, 2)],
            stream=_sys.stderr)
    return _COMMANDS[arguments.command](arguments.config,
                                        out=arguments.out)
