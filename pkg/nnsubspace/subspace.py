"""
Active subspace identification from sampled gradients:
the matrix ``C = E[grad f grad f^T]``, its spectrum, rank selection,
projections, adversarial perturbations and feature attributions.
"""

import logging as _logging
import math as _math
from concurrent.futures import ThreadPoolExecutor as _ThreadPoolExecutor
from typing import (Optional as _Optional,
                    Tuple as _Tuple)

import numpy as _np
from reprit.base import generate_repr as _generate_repr

from .core import io as _io
from .errors import (DegenerateSpectrumError as _DegenerateSpectrumError,
                     NonFiniteError as _NonFiniteError,
                     NonPositiveSemidefiniteError
                     as _NonPositiveSemidefiniteError)
from .functions import Differentiable as _Differentiable
from .netcore import (Bounds as _Bounds,
                      PIXEL_BOUNDS as _PIXEL_BOUNDS)
from .numkit import (Mat as _Mat,
                     RandomSource as _RandomSource,
                     Vec as _Vec,
                     pairwise_outer_sum as _pairwise_outer_sum,
                     sym_eig as _sym_eig)

_logger = _logging.getLogger(__name__)

NEGATIVE_EIGENVALUE_TOLERANCE = 1e-9
DEGENERACY_TOLERANCE = 1e-14


def _frozen(values: _np.ndarray) -> _np.ndarray:
    result = _np.array(values, dtype=_np.float64)
    result.setflags(write=False)
    return result


class NoiseModel:
    """
    Represents truncated Gaussian input distribution
    ``x = clip(center + sigma * xi, low, high)``
    with standard normal ``xi``.
    """

    __slots__ = '_bounds', '_center', '_sigma'

    def __init__(self,
                 center: _Vec,
                 sigma: float,
                 bounds: _Bounds = _PIXEL_BOUNDS) -> None:
        center = _frozen(center)
        low, high = bounds
        if center.ndim != 1 or not len(center):
            raise ValueError('Center should be non-empty vector, '
                             'but found shape: {}.'.format(center.shape))
        if not sigma >= 0.:
            raise ValueError('Sigma should be non-negative, '
                             'but found: {}.'.format(sigma))
        if not low < high:
            raise ValueError('Bounds should be increasing, '
                             'but found: {}.'.format(bounds))
        if ((center < low) | (center > high)).any():
            raise ValueError('Center should lie within {}.'.format(bounds))
        self._bounds, self._center, self._sigma = ((float(low), float(high)),
                                                   center, float(sigma))

    __repr__ = _generate_repr(__init__)

    @property
    def bounds(self) -> _Bounds:
        return self._bounds

    @property
    def center(self) -> _Vec:
        return self._center

    @property
    def dimension(self) -> int:
        return len(self._center)

    @property
    def sigma(self) -> float:
        return self._sigma

    def clip(self, xs: _np.ndarray) -> _np.ndarray:
        return _np.clip(xs, *self._bounds)

    def with_sigma(self, sigma: float) -> 'NoiseModel':
        return NoiseModel(self._center, sigma, self._bounds)


class GradientSampleSet:
    """Represents sampled noises, inputs, values and gradients."""

    __slots__ = '_gradients', '_inputs', '_noise_model', '_noises', '_values'

    def __init__(self,
                 noises: _Mat,
                 inputs: _Mat,
                 values: _Vec,
                 gradients: _Mat,
                 noise_model: NoiseModel) -> None:
        noises, inputs, values, gradients = (_frozen(noises), _frozen(inputs),
                                             _frozen(values),
                                             _frozen(gradients))
        shape = (len(values), noise_model.dimension)
        if not (len(values)
                and noises.shape == inputs.shape == gradients.shape == shape):
            raise ValueError('Samples should be non-empty and have shape {}, '
                             'but found: {}, {}, {}.'
                             .format(shape, noises.shape, inputs.shape,
                                     gradients.shape))
        self._gradients, self._inputs, self._noise_model = (gradients, inputs,
                                                            noise_model)
        self._noises, self._values = noises, values

    __repr__ = _generate_repr(__init__)

    def __len__(self) -> int:
        return len(self._values)

    @property
    def gradients(self) -> _Mat:
        return self._gradients

    @property
    def inputs(self) -> _Mat:
        return self._inputs

    @property
    def noise_model(self) -> NoiseModel:
        return self._noise_model

    @property
    def noises(self) -> _Mat:
        return self._noises

    @property
    def values(self) -> _Vec:
        return self._values


class Spectrum:
    """Represents descending eigenvalues with orthonormal eigenvectors."""

    __slots__ = '_eigenvalues', '_eigenvectors', '_samples_count'

    def __init__(self,
                 eigenvalues: _Vec,
                 eigenvectors: _Mat,
                 samples_count: int) -> None:
        self._eigenvalues, self._eigenvectors, self._samples_count = (
            _frozen(eigenvalues), _frozen(eigenvectors), samples_count)

    __repr__ = _generate_repr(__init__)

    @property
    def dimension(self) -> int:
        return len(self._eigenvalues)

    @property
    def eigenvalues(self) -> _Vec:
        return self._eigenvalues

    @property
    def eigenvectors(self) -> _Mat:
        return self._eigenvectors

    @property
    def samples_count(self) -> int:
        return self._samples_count

    def top(self, count: int) -> _Vec:
        return self._eigenvalues[:count]


class ActiveSubspace:
    """
    Represents span of the leading eigenvectors
    as matrix with orthonormal columns.
    """

    __slots__ = '_gap_ratio', '_has_gap', '_projection'

    def __init__(self,
                 projection: _Mat,
                 gap_ratio: float,
                 has_gap: bool) -> None:
        projection = _frozen(projection)
        if (projection.ndim != 2
                or not 1 <= projection.shape[1] < projection.shape[0]):
            raise ValueError('Projection should have shape (d, r) '
                             'with 1 <= r < d, but found: {}.'
                             .format(projection.shape))
        self._gap_ratio, self._has_gap, self._projection = (gap_ratio,
                                                            has_gap,
                                                            projection)

    __repr__ = _generate_repr(__init__)

    @property
    def dimension(self) -> int:
        return self._projection.shape[0]

    @property
    def gap_ratio(self) -> float:
        """Ratio of the last active eigenvalue to the next one."""
        return self._gap_ratio

    @property
    def has_gap(self) -> bool:
        """Whether the rank was chosen by a gap rather than by fallback."""
        return self._has_gap

    @property
    def projection(self) -> _Mat:
        return self._projection

    @property
    def rank(self) -> int:
        return self._projection.shape[1]


class Perturbation:
    """Represents input shifted along the first active direction."""

    __slots__ = ('_epsilon', '_perturbed', '_score_after', '_score_before',
                 '_sign')

    def __init__(self,
                 perturbed: _Vec,
                 score_before: float,
                 score_after: float,
                 epsilon: float,
                 sign: int) -> None:
        self._epsilon, self._perturbed, self._sign = (epsilon,
                                                      _frozen(perturbed),
                                                      sign)
        self._score_after, self._score_before = score_after, score_before

    __repr__ = _generate_repr(__init__)

    @property
    def epsilon(self) -> float:
        return self._epsilon

    @property
    def perturbed(self) -> _Vec:
        return self._perturbed

    @property
    def score_after(self) -> float:
        return self._score_after

    @property
    def score_before(self) -> float:
        return self._score_before

    @property
    def sign(self) -> int:
        return self._sign


def sample_count(alpha: float, beta: float, dimension: int) -> int:
    """
    Returns number of gradient samples ``ceil(alpha * beta * ln(d))``.

    >>> sample_count(10, 10, 28 * 28)
    667
    >>> sample_count(5, 5, 25_000_000)
    426
    """
    if not (alpha > 0. and beta > 0.):
        raise ValueError('Alpha and beta should be positive, '
                         'but found: {}, {}.'.format(alpha, beta))
    if dimension < 2:
        raise ValueError('Dimension should be at least 2, '
                         'but found: {}.'.format(dimension))
    return _math.ceil(alpha * beta * _math.log(dimension))


def draw_noise(noise_model: NoiseModel,
               source: _RandomSource) -> _Tuple[_Vec, _Vec]:
    """
    Draws standard normal noise with the truncated input it produces.

    >>> import numpy as np
    >>> noise_model = NoiseModel(np.full(3, 255.), 50.)
    >>> _, x = draw_noise(noise_model, _RandomSource(0))
    >>> bool((x <= 255.).all())
    True
    """
    noise = source.normal(noise_model.dimension)
    return noise, noise_model.clip(noise_model.center
                                   + noise_model.sigma * noise)


def draw_noise_many(noise_model: NoiseModel,
                    source: _RandomSource,
                    count: int) -> _Tuple[_Mat, _Mat]:
    """Draws ``count`` noises with truncated inputs as matrix rows."""
    noises = source.normal((count, noise_model.dimension))
    return noises, noise_model.clip(noise_model.center
                                    + noise_model.sigma * noises)


def estimate_c(function: _Differentiable,
               noise_model: NoiseModel,
               count: int,
               source: _RandomSource,
               *,
               workers: int = 1) -> _Tuple[_Mat, GradientSampleSet]:
    """
    Estimates ``C = E[grad f grad f^T]`` by Monte Carlo.

    Noise is drawn sequentially from the source before any evaluation,
    gradients may be evaluated concurrently, the outer products
    are summed pairwise in sample order, so the result does not depend
    on ``workers``.

    Time complexity:
        ``O(count * (gradient_cost + dimension ** 2))``
    Memory complexity:
        ``O(count * dimension + dimension ** 2)``

    :param function: differentiable quantity of interest.
    :param noise_model: input distribution.
    :param count: positive number of samples.
    :param source: random source for the noise.
    :param workers: number of threads evaluating gradients.
    :returns: symmetric positive semi-definite estimate and the samples.
    """
    if count < 1:
        raise ValueError('Count should be positive, '
                         'but found: {}.'.format(count))
    if function.dimension != noise_model.dimension:
        raise ValueError('Function of dimension {} does not match noise '
                         'of dimension {}.'.format(function.dimension,
                                                   noise_model.dimension))
    noises, inputs = draw_noise_many(noise_model, source, count)
    values = _np.asarray(function.values(inputs), dtype=_np.float64)
    if workers > 1:
        with _ThreadPoolExecutor(max_workers=workers) as executor:
            gradients = list(executor.map(function.gradient, inputs))
    else:
        gradients = [function.gradient(x) for x in inputs]
    gradients = _np.array(gradients, dtype=_np.float64)
    for index, gradient in enumerate(gradients):
        if not _np.isfinite(gradient).all():
            raise _NonFiniteError('Non-finite gradient at sample {}.'
                                  .format(index))
    _logger.info('sampled %d gradients of dimension %d',
                 count, noise_model.dimension)
    return (_pairwise_outer_sum(gradients,
                                scale=1. / count),
            GradientSampleSet(noises, inputs, values, gradients,
                              noise_model))


def decompose(c: _Mat, *, samples_count: int = 0) -> Spectrum:
    """
    Decomposes positive semi-definite matrix,
    clamping negligible negative eigenvalues to zero.

    :param c: symmetric positive semi-definite matrix.
    :param samples_count: number of samples the matrix was estimated from.
    :returns: spectrum.

    >>> import numpy as np
    >>> decompose(np.diag([1., 3., 2.])).eigenvalues.tolist()
    [3.0, 2.0, 1.0]
    """
    eigenvalues, eigenvectors = _sym_eig(c)
    tolerance = NEGATIVE_EIGENVALUE_TOLERANCE * float(
            _np.max(_np.abs(eigenvalues)))
    if eigenvalues[-1] < -tolerance:
        raise _NonPositiveSemidefiniteError(
                'Eigenvalue {:.3e} is negative beyond tolerance {:.3e}.'
                .format(eigenvalues[-1], tolerance))
    return Spectrum(_np.maximum(eigenvalues, 0.), eigenvectors,
                    samples_count)


def select_rank(spectrum: Spectrum,
                gap_threshold: float = 10.,
                r_max: int = 5) -> ActiveSubspace:
    """
    Selects the smallest rank ``r <= r_max``
    with ``eigenvalues[r - 1] / eigenvalues[r] >= gap_threshold``,
    falling back to rank 1 without a gap.

    :param spectrum: spectrum to select from.
    :param gap_threshold: minimal ratio of consecutive eigenvalues.
    :param r_max: maximal rank, less than the dimension.
    :returns: active subspace.
    """
    if not gap_threshold > 1.:
        raise ValueError('Gap threshold should exceed 1, '
                         'but found: {}.'.format(gap_threshold))
    if not 1 <= r_max < spectrum.dimension:
        raise ValueError('Maximal rank should lie within [1, {}), '
                         'but found: {}.'.format(spectrum.dimension, r_max))
    eigenvalues = spectrum.eigenvalues
    trace = float(_np.sum(eigenvalues))
    if not (trace > 0. and eigenvalues[0] > DEGENERACY_TOLERANCE * trace):
        raise _DegenerateSpectrumError('Spectrum is degenerate, '
                                       'the function is locally constant.')
    ratios = [_gap_ratio(eigenvalues[rank - 1], eigenvalues[rank])
              for rank in range(1, r_max + 1)]
    for rank, ratio in enumerate(ratios,
                                 start=1):
        if ratio >= gap_threshold:
            has_gap = True
            break
    else:
        rank, ratio, has_gap = 1, ratios[0], False
        _logger.warning('no eigenvalue gap of %g found within rank %d, '
                        'falling back to rank 1', gap_threshold, r_max)
    return ActiveSubspace(spectrum.eigenvectors[:, :rank], ratio, has_gap)


def _gap_ratio(eigenvalue: float, next_eigenvalue: float) -> float:
    return (eigenvalue / next_eigenvalue
            if next_eigenvalue > 0.
            else _math.inf)


def project(subspace: ActiveSubspace, noise: _np.ndarray) -> _np.ndarray:
    """
    Projects noise vector or rows of noise matrix onto active directions.

    >>> import numpy as np
    >>> subspace = ActiveSubspace(np.eye(3)[:, :1], 10., True)
    >>> project(subspace, np.array([3., 5., 7.])).tolist()
    [3.0]
    """
    noise = _np.asarray(noise, dtype=_np.float64)
    if noise.shape[-1] != subspace.dimension:
        raise ValueError('Noise of shape {} does not match subspace '
                         'of dimension {}.'.format(noise.shape,
                                                   subspace.dimension))
    return noise @ subspace.projection


def adversarial_perturb(function: _Differentiable,
                        noise_model: NoiseModel,
                        subspace: ActiveSubspace,
                        epsilon: float) -> Perturbation:
    """
    Shifts the noise-free input by ``epsilon`` along the first active
    direction, in the orientation lowering the score.

    :param function: quantity of interest.
    :param noise_model: distribution centered at the input to perturb.
    :param subspace: active subspace.
    :param epsilon: non-negative Euclidean norm of the shift.
    :returns: perturbed input with scores before and after.
    """
    if not epsilon >= 0.:
        raise ValueError('Epsilon should be non-negative, '
                         'but found: {}.'.format(epsilon))
    center = noise_model.center
    direction = subspace.projection[:, 0]
    score_before = function.value(center)
    if epsilon == 0.:
        return Perturbation(center, score_before, score_before, epsilon, 1)
    candidates = [(noise_model.clip(center + sign * epsilon * direction),
                   sign)
                  for sign in (1, -1)]
    scores = function.values(_np.array([candidate
                                        for candidate, _ in candidates]))
    index = int(scores[1] < scores[0])
    perturbed, sign = candidates[index]
    return Perturbation(perturbed, score_before, float(scores[index]),
                        epsilon, sign)


def random_direction_changes(function: _Differentiable,
                             noise_model: NoiseModel,
                             epsilon: float,
                             count: int,
                             source: _RandomSource) -> _Vec:
    """
    Returns absolute score changes caused by shifting the noise-free input
    by ``epsilon`` along ``count`` uniformly random directions.
    """
    center = noise_model.center
    directions = source.normal((count, noise_model.dimension))
    directions /= _np.linalg.norm(directions,
                                  axis=1,
                                  keepdims=True)
    score = function.value(center)
    return _np.abs(function.values(noise_model.clip(center
                                                    + epsilon * directions))
                   - score)


def attribution(spectrum: Spectrum, rank: int) -> _Vec:
    """
    Returns activity scores ``sum(eigenvalues[i] * eigenvectors[j, i] ** 2
    for i in range(rank))`` of each feature ``j``.

    Reference:
        https://doi.org/10.1016/j.ress.2016.12.002

    >>> import numpy as np
    >>> spectrum = decompose(np.outer([1., 2.], [1., 2.]))
    >>> attribution(spectrum, 1).round(12).tolist()
    [1.0, 4.0]
    """
    if not 1 <= rank <= spectrum.dimension:
        raise ValueError('Rank should lie within [1, {}], '
                         'but found: {}.'.format(spectrum.dimension, rank))
    return ((spectrum.eigenvectors[:, :rank] ** 2)
            @ spectrum.eigenvalues[:rank])


def write_spectrum_csv(spectrum: Spectrum, path: str) -> None:
    """Writes ``index,eigenvalue`` rows with 1-based indices."""
    _io.write_csv(path, ['index', 'eigenvalue'],
                  [_np.arange(1, spectrum.dimension + 1),
                   spectrum.eigenvalues],
                  [_io.INDEX_FORMAT, _io.FLOAT_FORMAT])


def write_eigenvectors_csv(spectrum: Spectrum,
                           path: str,
                           count: _Optional[int] = None) -> None:
    """Writes matrix whose ``i``-th column is the ``i``-th eigenvector."""
    vectors = spectrum.eigenvectors[:, :count]
    _io.write_csv(path,
                  ['w{}'.format(index)
                   for index in range(1, vectors.shape[1] + 1)],
                  list(vectors.T),
                  [_io.FLOAT_FORMAT] * vectors.shape[1])


def write_summary_csv(samples: GradientSampleSet,
                      subspace: ActiveSubspace,
                      path: str) -> None:
    """Writes ``sample_index,x1..xr,f_value`` rows of active variables."""
    active_variables = project(subspace, samples.noises)
    _io.write_csv(path,
                  ['sample_index',
                   *['x{}'.format(index)
                     for index in range(1, subspace.rank + 1)],
                   'f_value'],
                  [_np.arange(len(samples)), *active_variables.T,
                   samples.values],
                  [_io.INDEX_FORMAT,
                   *[_io.FLOAT_FORMAT] * subspace.rank,
                   _io.FLOAT_FORMAT])


def activity_total(spectrum: Spectrum, rank: int) -> float:
    """Returns sum of the leading ``rank`` eigenvalues."""
    return float(_np.sum(spectrum.eigenvalues[:rank]))

