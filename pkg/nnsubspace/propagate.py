"""
Propagation of input uncertainty through a differentiable quantity:
gradient sampling, subspace identification, response surface fitting
and cheap evaluation of the surface, with direct Monte Carlo baseline.
"""

import logging as _logging
from contextlib import contextmanager as _contextmanager
from typing import (Any as _Any,
                    Dict as _Dict,
                    Iterator as _Iterator,
                    List as _List,
                    Optional as _Optional,
                    Sequence as _Sequence,
                    Tuple as _Tuple)

import numpy as _np
from reprit.base import generate_repr as _generate_repr
from scipy import stats as _stats

from . import __version__ as _version
from .core import io as _io
from .errors import (ConfigurationError as _ConfigurationError,
                     NumericalError as _NumericalError,
                     WorkflowError as _WorkflowError)
from .functions import (Counted as _Counted,
                        Differentiable as _Differentiable)
from .netcore import ScoreKind as _ScoreKind
from .numkit import (RandomSource as _RandomSource,
                     Vec as _Vec)
from .subspace import (ActiveSubspace as _ActiveSubspace,
                       GradientSampleSet as _GradientSampleSet,
                       NoiseModel as _NoiseModel,
                       Spectrum as _Spectrum,
                       decompose as _decompose,
                       draw_noise_many as _draw_noise_many,
                       estimate_c as _estimate_c,
                       project as _project,
                       sample_count as _sample_count,
                       select_rank as _select_rank)
from .surface import (PolySurface as _PolySurface,
                      fit as _fit,
                      to_dict as _surface_to_dict)

_logger = _logging.getLogger(__name__)

GRADIENT_COST_WEIGHT = 2
RELATIVE_ERROR_DENOMINATOR = 1e-12
CHUNK_SIZE = 4096
TOP_EIGENVALUES_COUNT = 10


class PropagationConfig:
    """Represents parameters of the propagation workflow."""

    __slots__ = ('_alpha', '_beta', '_bins', '_degree', '_gap_threshold',
                 '_mc_sample_count', '_mc_seed', '_r_max', '_rs_sample_count',
                 '_score_kind', '_seed', '_sigma', '_workers')

    def __init__(self,
                 sigma: float,
                 *,
                 alpha: float = 10.,
                 beta: float = 10.,
                 gap_threshold: float = 10.,
                 r_max: int = 5,
                 degree: int = 2,
                 rs_sample_count: int = 50000,
                 mc_sample_count: int = 50000,
                 seed: int = 0,
                 mc_seed: _Optional[int] = None,
                 score_kind: _ScoreKind = _ScoreKind.SOFTMAX_PROBABILITY,
                 bins: int = 50,
                 workers: int = 1) -> None:
        if mc_seed is None:
            mc_seed = seed + 1
        for name, value in [('sigma', sigma)]:
            if not value >= 0.:
                raise _ConfigurationError('{} should be non-negative, '
                                          'but found: {}.'.format(name,
                                                                  value))
        for name, value in [('alpha', alpha), ('beta', beta)]:
            if not value > 0.:
                raise _ConfigurationError('{} should be positive, '
                                          'but found: {}.'.format(name,
                                                                  value))
        if not gap_threshold > 1.:
            raise _ConfigurationError('gap_threshold should exceed 1, '
                                      'but found: {}.'.format(gap_threshold))
        for name, value in [('r_max', r_max), ('degree', degree),
                            ('rs_sample_count', rs_sample_count),
                            ('mc_sample_count', mc_sample_count),
                            ('bins', bins), ('workers', workers)]:
            if not (isinstance(value, int) and value >= 1):
                raise _ConfigurationError('{} should be positive integer, '
                                          'but found: {!r}.'.format(name,
                                                                    value))
        for name, value in [('seed', seed), ('mc_seed', mc_seed)]:
            if not (isinstance(value, int) and 0 <= value < 2 ** 64):
                raise _ConfigurationError('{} should be 64-bit unsigned '
                                          'integer, but found: {!r}.'
                                          .format(name, value))
        try:
            score_kind = _ScoreKind(score_kind)
        except ValueError:
            raise _ConfigurationError('Unknown score kind: {!r}.'
                                      .format(score_kind)) from None
        self._alpha, self._beta, self._sigma = (float(alpha), float(beta),
                                                float(sigma))
        self._bins, self._degree, self._gap_threshold, self._r_max = (
            bins, degree, float(gap_threshold), r_max)
        self._mc_sample_count, self._rs_sample_count = (mc_sample_count,
                                                        rs_sample_count)
        self._mc_seed, self._seed = mc_seed, seed
        self._score_kind, self._workers = score_kind, workers

    __repr__ = _generate_repr(__init__)

    @property
    def alpha(self) -> float:
        return self._alpha

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def bins(self) -> int:
        return self._bins

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def gap_threshold(self) -> float:
        return self._gap_threshold

    @property
    def mc_sample_count(self) -> int:
        return self._mc_sample_count

    @property
    def mc_seed(self) -> int:
        return self._mc_seed

    @property
    def r_max(self) -> int:
        return self._r_max

    @property
    def rs_sample_count(self) -> int:
        return self._rs_sample_count

    @property
    def score_kind(self) -> _ScoreKind:
        return self._score_kind

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def sigma(self) -> float:
        return self._sigma

    @property
    def workers(self) -> int:
        return self._workers

    def with_sigma(self, sigma: float) -> 'PropagationConfig':
        parameters = self.to_dict()
        del parameters['sigma']
        return PropagationConfig(sigma, **parameters)

    def to_dict(self) -> _Dict[str, _Any]:
        return {'alpha': self._alpha,
                'beta': self._beta,
                'bins': self._bins,
                'degree': self._degree,
                'gap_threshold': self._gap_threshold,
                'mc_sample_count': self._mc_sample_count,
                'mc_seed': self._mc_seed,
                'r_max': self._r_max,
                'rs_sample_count': self._rs_sample_count,
                'score_kind': self._score_kind.value,
                'seed': self._seed,
                'sigma': self._sigma,
                'workers': self._workers}


class OutputStats:
    """
    Represents moments and histogram of sampled outputs
    with the number of model calls spent on them.

    Standard deviation is the population one, i.e. normalized by ``count``.
    """

    __slots__ = ('_counts', '_edges', '_evaluations', '_gradient_calls',
                 '_kurtosis', '_mean', '_skewness', '_std', '_value_calls')

    def __init__(self,
                 mean: float,
                 std: float,
                 skewness: float,
                 kurtosis: float,
                 edges: _Vec,
                 counts: _Sequence[int],
                 evaluations: int,
                 value_calls: int,
                 gradient_calls: int) -> None:
        self._mean, self._std, self._skewness, self._kurtosis = (
            float(mean), float(std), float(skewness), float(kurtosis))
        self._edges = _np.array(edges, dtype=_np.float64)
        self._counts = _np.array(counts, dtype=_np.int64)
        self._edges.setflags(write=False)
        self._counts.setflags(write=False)
        self._evaluations, self._gradient_calls, self._value_calls = (
            evaluations, gradient_calls, value_calls)

    __repr__ = _generate_repr(__init__)

    @property
    def counts(self) -> _np.ndarray:
        return self._counts

    @property
    def edges(self) -> _Vec:
        return self._edges

    @property
    def evaluations(self) -> int:
        """Number of inputs the model was evaluated at."""
        return self._evaluations

    @property
    def gradient_calls(self) -> int:
        return self._gradient_calls

    @property
    def kurtosis(self) -> float:
        """Excess kurtosis."""
        return self._kurtosis

    @property
    def mean(self) -> float:
        return self._mean

    @property
    def sample_count(self) -> int:
        return int(self._counts.sum())

    @property
    def skewness(self) -> float:
        return self._skewness

    @property
    def std(self) -> float:
        return self._std

    @property
    def value_calls(self) -> int:
        return self._value_calls

    @property
    def weighted_cost(self) -> int:
        """Forward-equivalent cost, backward sweep counted as one more."""
        return self._value_calls + GRADIENT_COST_WEIGHT * self._gradient_calls

    def to_dict(self) -> _Dict[str, _Any]:
        return {'mean': self._mean,
                'std': self._std,
                'skewness': self._skewness,
                'kurtosis': self._kurtosis,
                'sample_count': self.sample_count,
                'histogram': {'edges': self._edges.tolist(),
                              'counts': self._counts.tolist()},
                'evaluations': self._evaluations,
                'value_calls': self._value_calls,
                'gradient_calls': self._gradient_calls,
                'weighted_cost': self.weighted_cost}


class Comparison:
    """Represents discrepancy and cost ratio of two estimates."""

    __slots__ = ('_cost_ratio', '_rel_err_mean', '_rel_err_std',
                 '_weighted_cost_ratio')

    def __init__(self,
                 rel_err_mean: float,
                 rel_err_std: float,
                 cost_ratio: float,
                 weighted_cost_ratio: float) -> None:
        self._cost_ratio, self._rel_err_mean, self._rel_err_std = (
            cost_ratio, rel_err_mean, rel_err_std)
        self._weighted_cost_ratio = weighted_cost_ratio

    __repr__ = _generate_repr(__init__)

    @property
    def cost_ratio(self) -> float:
        """Ratio of model evaluations counts."""
        return self._cost_ratio

    @property
    def rel_err_mean(self) -> float:
        return self._rel_err_mean

    @property
    def rel_err_std(self) -> float:
        return self._rel_err_std

    @property
    def weighted_cost_ratio(self) -> float:
        """Ratio of forward-equivalent costs."""
        return self._weighted_cost_ratio

    def to_dict(self) -> _Dict[str, _Any]:
        return {'rel_err_mean': self._rel_err_mean,
                'rel_err_std': self._rel_err_std,
                'cost_ratio': _io.to_number(self._cost_ratio),
                'weighted_cost_ratio':
                    _io.to_number(self._weighted_cost_ratio)}


class PropagationReport:
    """Represents outcome of the propagation workflow."""

    __slots__ = ('_config', '_mc_stats', '_rs_stats', '_samples',
                 '_spectrum', '_subspace', '_surface')

    def __init__(self,
                 config: PropagationConfig,
                 rs_stats: OutputStats,
                 *,
                 samples: _Optional[_GradientSampleSet] = None,
                 spectrum: _Optional[_Spectrum] = None,
                 subspace: _Optional[_ActiveSubspace] = None,
                 surface: _Optional[_PolySurface] = None,
                 mc_stats: _Optional[OutputStats] = None) -> None:
        self._config, self._mc_stats, self._rs_stats = (config, mc_stats,
                                                        rs_stats)
        self._samples, self._spectrum = samples, spectrum
        self._subspace, self._surface = subspace, surface

    __repr__ = _generate_repr(__init__)

    @property
    def comparison(self) -> _Optional[Comparison]:
        return (None
                if self._mc_stats is None
                else compare(self._rs_stats, self._mc_stats))

    @property
    def config(self) -> PropagationConfig:
        return self._config

    @property
    def is_degenerate(self) -> bool:
        """Whether the workflow short-circuited on noise-free input."""
        return self._subspace is None

    @property
    def low_confidence(self) -> bool:
        """Whether the rank was chosen without an eigenvalue gap."""
        return self._subspace is not None and not self._subspace.has_gap

    @property
    def mc_stats(self) -> _Optional[OutputStats]:
        return self._mc_stats

    @property
    def rs_stats(self) -> OutputStats:
        return self._rs_stats

    @property
    def samples(self) -> _Optional[_GradientSampleSet]:
        return self._samples

    @property
    def spectrum(self) -> _Optional[_Spectrum]:
        return self._spectrum

    @property
    def subspace(self) -> _Optional[_ActiveSubspace]:
        return self._subspace

    @property
    def surface(self) -> _Optional[_PolySurface]:
        return self._surface

    def with_direct(self, mc_stats: OutputStats) -> 'PropagationReport':
        return PropagationReport(self._config, self._rs_stats,
                                 samples=self._samples,
                                 spectrum=self._spectrum,
                                 subspace=self._subspace,
                                 surface=self._surface,
                                 mc_stats=mc_stats)

    def to_dict(self) -> _Dict[str, _Any]:
        subspace, comparison = self._subspace, self.comparison
        return {
            'version': _version,
            'config': self._config.to_dict(),
            'seed': self._config.seed,
            'std_estimator': 'population',
            'degenerate': self.is_degenerate,
            'samples_count': (0
                              if self._samples is None
                              else len(self._samples)),
            'top_eigenvalues': (
                []
                if self._spectrum is None
                else self._spectrum.top(TOP_EIGENVALUES_COUNT).tolist()),
            'rank': None if subspace is None else subspace.rank,
            'has_gap': None if subspace is None else subspace.has_gap,
            'gap_ratio': (None
                          if subspace is None
                          else _io.to_number(subspace.gap_ratio)),
            'low_confidence': self.low_confidence,
            'surface': (None
                        if self._surface is None
                        else _surface_to_dict(self._surface)),
            'rs': self._rs_stats.to_dict(),
            'mc': None if self._mc_stats is None else self._mc_stats.to_dict(),
            'comparison': None if comparison is None else comparison.to_dict()
        }


def histogram(values: _Vec, bins: int) -> _Tuple[_Vec, _np.ndarray]:
    """
    Counts values in uniform bins spanning their range,
    the last bin includes its right edge.
    Identical values fall into a single bin.

    >>> import numpy as np
    >>> edges, counts = histogram(np.array([0., 0.5, 1.]), 2)
    >>> edges.tolist(), counts.tolist()
    ([0.0, 0.5, 1.0], [1, 2])
    """
    values = _np.asarray(values, dtype=_np.float64)
    if bins < 1 or not len(values):
        raise ValueError('Bins count and values should be non-empty, '
                         'but found: {}, {}.'.format(bins, len(values)))
    low, high = float(_np.min(values)), float(_np.max(values))
    if low == high:
        half_width = 0.5 * max(1., abs(low))
        return (_np.array([low - half_width, low + half_width]),
                _np.array([len(values)]))
    counts, edges = _np.histogram(values,
                                  bins=bins,
                                  range=(low, high))
    return edges, counts


def moments(values: _Vec) -> _Tuple[float, float, float, float]:
    """
    Returns mean, population standard deviation, skewness
    and excess kurtosis.
    """
    values = _np.asarray(values, dtype=_np.float64)
    mean = float(_np.mean(values))
    std = float(_np.std(values))
    # spreads lost to rounding leave skewness and kurtosis undefined
    if std <= 10. * _np.finfo(_np.float64).resolution * abs(mean):
        return mean, std, 0., 0.
    return (mean, std, float(_stats.skew(values)),
            float(_stats.kurtosis(values)))


def summarize(values: _Vec,
              bins: int,
              *,
              evaluations: int,
              value_calls: int,
              gradient_calls: int) -> OutputStats:
    edges, counts = histogram(values, bins)
    return OutputStats(*moments(values), edges, counts, evaluations,
                       value_calls, gradient_calls)


def compare(rs_stats: OutputStats, mc_stats: OutputStats) -> Comparison:
    """
    Compares response surface estimate against direct Monte Carlo.

    Relative errors are normalized by the Monte Carlo values
    bounded from below by ``1e-12``.
    """
    return Comparison(_relative_error(rs_stats.mean, mc_stats.mean),
                      _relative_error(rs_stats.std, mc_stats.std),
                      _ratio(mc_stats.evaluations, rs_stats.evaluations),
                      _ratio(mc_stats.weighted_cost, rs_stats.weighted_cost))


def _relative_error(estimate: float, reference: float) -> float:
    return abs(estimate - reference) / max(abs(reference),
                                           RELATIVE_ERROR_DENOMINATOR)


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else float('inf')


@_contextmanager
def _stage(name: str) -> _Iterator[None]:
    _logger.info('%s stage', name)
    try:
        yield
    except _WorkflowError:
        raise
    except _NumericalError as error:
        raise _WorkflowError(name, error) from error


def _chunks_sizes(total: int) -> _Iterator[int]:
    for start in range(0, total, CHUNK_SIZE):
        yield min(CHUNK_SIZE, total - start)


def identify(function: _Differentiable,
             noise_model: _NoiseModel,
             config: PropagationConfig,
             source: _RandomSource
             ) -> _Tuple[_GradientSampleSet, _Spectrum, _ActiveSubspace]:
    """
    Samples gradients, decomposes their outer products mean
    and selects the active subspace.
    """
    dimension = noise_model.dimension
    if dimension < 2:
        raise _ConfigurationError('Input dimension should be at least 2, '
                                  'but found: {}.'.format(dimension))
    count = _sample_count(config.alpha, config.beta, dimension)
    with _stage('sampling'):
        c, samples = _estimate_c(function, noise_model, count, source,
                                 workers=config.workers)
    with _stage('decomposition'):
        spectrum = _decompose(c,
                              samples_count=count)
    with _stage('rank selection'):
        subspace = _select_rank(spectrum, config.gap_threshold,
                                min(config.r_max, dimension - 1))
    _logger.info('selected rank %d with gap ratio %g',
                 subspace.rank, subspace.gap_ratio)
    return samples, spectrum, subspace


def run_workflow(function: _Differentiable,
                 noise_model: _NoiseModel,
                 config: PropagationConfig) -> PropagationReport:
    """
    Propagates input noise through the function:
    samples gradients, identifies active subspace,
    fits response surface on the sampled values
    and evaluates it at fresh noise draws.

    Noise-free input short-circuits to a single evaluation.

    Time complexity:
        ``O(samples_count * (gradient_cost + dimension ** 2)
        + sweeps * dimension ** 3 + rs_sample_count * dimension)``
    Memory complexity:
        ``O(samples_count * dimension + dimension ** 2)``

    where ``samples_count = ceil(alpha * beta * ln(dimension))``.

    :param function: differentiable quantity of interest.
    :param noise_model: input distribution.
    :param config: workflow parameters.
    :returns: report with spectrum, subspace, surface and output statistics.
    """
    counted = _Counted(function)
    source = _RandomSource(config.seed)
    if noise_model.sigma == 0.:
        value = counted.value(noise_model.center)
        edges, counts = histogram(_np.array([value]), config.bins)
        counts = counts * config.rs_sample_count
        return PropagationReport(config,
                                 OutputStats(value, 0., 0., 0., edges, counts,
                                             1, counted.value_calls,
                                             counted.gradient_calls))
    samples, spectrum, subspace = identify(counted, noise_model, config,
                                           source)
    with _stage('fitting'):
        surface = _fit(_project(subspace, samples.noises), samples.values,
                       config.degree)
    _logger.info('fitted degree %d surface with R^2 %.6g',
                 surface.degree, surface.r_squared)
    value_calls, gradient_calls = counted.value_calls, counted.gradient_calls
    with _stage('propagation'):
        values = evaluate_surface(surface, subspace, noise_model,
                                  config.rs_sample_count, source.spawn(1))
    assert (counted.value_calls, counted.gradient_calls) == (value_calls,
                                                             gradient_calls)
    return PropagationReport(
            config,
            summarize(values, config.bins,
                      evaluations=len(samples),
                      value_calls=value_calls,
                      gradient_calls=gradient_calls),
            samples=samples,
            spectrum=spectrum,
            subspace=subspace,
            surface=surface)


def evaluate_surface(surface: _PolySurface,
                     subspace: _ActiveSubspace,
                     noise_model: _NoiseModel,
                     count: int,
                     source: _RandomSource) -> _Vec:
    """Evaluates surface at active variables of fresh noise draws."""
    return _np.concatenate([
        surface.evaluate_many(_project(subspace,
                                       _draw_noise_many(noise_model, source,
                                                        chunk_size)[0]))
        for chunk_size in _chunks_sizes(count)])


def direct_mc(function: _Differentiable,
              noise_model: _NoiseModel,
              count: int,
              source: _RandomSource,
              *,
              bins: int = 50) -> OutputStats:
    """
    Estimates output statistics by evaluating the function
    at ``count`` noisy inputs.
    """
    if count < 2:
        raise ValueError('Count should be at least 2, '
                         'but found: {}.'.format(count))
    values = _np.concatenate([
        _np.asarray(function.values(_draw_noise_many(noise_model, source,
                                                     chunk_size)[1]),
                    dtype=_np.float64)
        for chunk_size in _chunks_sizes(count)])
    _logger.info('evaluated %d direct Monte Carlo samples', count)
    return summarize(values, bins,
                     evaluations=count,
                     value_calls=count,
                     gradient_calls=0)


def run_comparison(function: _Differentiable,
                   noise_model: _NoiseModel,
                   config: PropagationConfig) -> PropagationReport:
    """Runs workflow and direct Monte Carlo with independent seeds."""
    report = run_workflow(function, noise_model, config)
    return report.with_direct(direct_mc(function, noise_model,
                                        config.mc_sample_count,
                                        _RandomSource(config.mc_seed),
                                        bins=config.bins))


def sweep(function: _Differentiable,
          noise_model: _NoiseModel,
          config: PropagationConfig,
          sigmas: _Sequence[float]) -> _List[PropagationReport]:
    """Runs workflow for each noise scale."""
    return [run_workflow(function, noise_model.with_sigma(sigma),
                         config.with_sigma(sigma))
            for sigma in sigmas]


def write_report_json(report: PropagationReport,
                      path: str,
                      **extra: _Any) -> None:
    _io.write_json(path, {**report.to_dict(), **extra})


def write_histogram_csv(stats: OutputStats, path: str) -> None:
    """Writes ``bin_index,left,right,count`` rows."""
    _io.write_csv(path, ['bin_index', 'left', 'right', 'count'],
                  [_np.arange(len(stats.counts)), stats.edges[:-1],
                   stats.edges[1:], stats.counts],
                  [_io.INDEX_FORMAT, _io.FLOAT_FORMAT, _io.FLOAT_FORMAT,
                   _io.INDEX_FORMAT])
