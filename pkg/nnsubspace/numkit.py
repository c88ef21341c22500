"""
Dense linear algebra and seeded random draws
shared by the rest of the package.

Vectors and matrices are ``numpy`` arrays of 64-bit floats.
"""

from typing import (Optional as _Optional,
                    Tuple as _Tuple,
                    Union as _Union)

import numpy as _np
from reprit.base import generate_repr as _generate_repr

from .core import (jacobi as _jacobi,
                   summation as _summation)
from .errors import (AsymmetricMatrixError as _AsymmetricMatrixError,
                     ConvergenceError as _ConvergenceError,
                     IllConditionedError as _IllConditionedError,
                     NonFiniteError as _NonFiniteError)

Vec = _np.ndarray
Mat = _np.ndarray

ASYMMETRY_TOLERANCE = 1e-12
MAX_CONDITION_NUMBER = 1e12
SIGNIFICANT_COMPONENT = 1e-12


class RandomSource:
    """
    Represents reproducible stream of random draws.

    Draws come from ``PCG64`` bit generator seeded with
    ``SeedSequence(seed, spawn_key=(stream,))``,
    so equal ``(seed, stream)`` pairs produce bit-identical streams.
    """

    __slots__ = '_generator', '_seed', '_stream'

    def __init__(self, seed: int, *, stream: int = 0) -> None:
        if not 0 <= seed < 2 ** 64:
            raise ValueError('Seed should be 64-bit unsigned integer, '
                             'but found: {}.'.format(seed))
        if stream < 0:
            raise ValueError('Stream should be non-negative, '
                             'but found: {}.'.format(stream))
        self._seed, self._stream = seed, stream
        self._generator = _np.random.Generator(_np.random.PCG64(
                _np.random.SeedSequence(seed, spawn_key=(stream,))))

    __repr__ = _generate_repr(__init__)

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def stream(self) -> int:
        return self._stream

    def normal(self, shape: _Union[int, _Tuple[int, ...]]) -> _np.ndarray:
        return self._generator.standard_normal(shape)

    def uniform(self,
                low: float,
                high: float,
                shape: _Union[int, _Tuple[int, ...]]) -> _np.ndarray:
        return self._generator.uniform(low, high, shape)

    def permutation(self, size: int) -> _np.ndarray:
        return self._generator.permutation(size)

    def spawn(self, offset: int) -> 'RandomSource':
        """
        Returns independent source for worker with given offset.

        >>> source = RandomSource(7)
        >>> source.spawn(2).stream == 2
        True
        """
        return RandomSource(self._seed,
                            stream=self._stream + offset)


def gaussian(source: RandomSource, count: int) -> Vec:
    """
    Draws independent standard normal values.

    :param source: random source to draw from.
    :param count: positive number of draws.
    :returns: vector of draws.

    >>> import numpy as np
    >>> np.array_equal(gaussian(RandomSource(5), 5),
    ...                gaussian(RandomSource(5), 5))
    True
    """
    if count < 1:
        raise ValueError('Count should be positive, '
                         'but found: {}.'.format(count))
    return source.normal(count)


def sym_eig(matrix: Mat,
            tolerance: float = 1e-11) -> _Tuple[Vec, Mat]:
    """
    Decomposes symmetric matrix into eigenvalues in descending order
    and orthonormal eigenvectors as columns.

    Each eigenvector has its first component exceeding ``1e-12``
    in magnitude positive.

    Time complexity:
        ``O(sweeps * size ** 3)``
    Memory complexity:
        ``O(size ** 2)``

    where ``size = len(matrix)``, ``sweeps`` is bounded by 100.

    Reference:
        https://en.wikipedia.org/wiki/Jacobi_eigenvalue_algorithm

    :param matrix: symmetric square matrix.
    :param tolerance:
        sweeping stops once off-diagonal Frobenius norm
        falls below ``tolerance`` times Frobenius norm of the input.
    :returns: eigenvalues and eigenvectors.

    >>> import numpy as np
    >>> values, vectors = sym_eig(np.array([[2., 1.], [1., 2.]]))
    >>> np.allclose(values, [3., 1.])
    True
    >>> np.allclose(vectors, np.array([[1., 1.], [1., -1.]]) / np.sqrt(2.))
    True
    """
    matrix = _np.asarray(matrix, dtype=_np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError('Matrix should be square, '
                         'but found shape: {}.'.format(matrix.shape))
    if not len(matrix):
        raise ValueError('Matrix should be non-empty.')
    if not _np.isfinite(matrix).all():
        raise _NonFiniteError('Matrix has non-finite entries.')
    norm = float(_np.linalg.norm(matrix))
    asymmetry = float(_np.linalg.norm(matrix - matrix.T))
    if asymmetry > ASYMMETRY_TOLERANCE * norm:
        raise _AsymmetricMatrixError(
                'Matrix asymmetry {:.3e} exceeds {:.0e} of its norm {:.3e}.'
                .format(asymmetry, ASYMMETRY_TOLERANCE, norm))
    values, vectors, sweeps = _jacobi.diagonalize((matrix + matrix.T) / 2.,
                                                  tolerance)
    if sweeps < 0:
        raise _ConvergenceError('Jacobi rotations did not converge in {} '
                                'sweeps.'.format(_jacobi.MAX_SWEEPS))
    order = _np.argsort(-values, kind='stable')
    values, vectors = values[order], vectors[:, order]
    for column in vectors.T:
        significant, = _np.nonzero(_np.abs(column) > SIGNIFICANT_COMPONENT)
        if len(significant) and column[significant[0]] < 0.:
            column *= -1.
    return values, vectors


def condition_number(matrix: Mat) -> float:
    singular_values = _np.linalg.svd(matrix,
                                     compute_uv=False)
    return (float(singular_values[0] / singular_values[-1])
            if singular_values[-1] > 0.
            else _np.inf)


def lstsq(design: Mat,
          targets: Vec,
          *,
          name: str = 'least squares fit') -> Vec:
    """
    Solves linear least squares problem via QR factorization.

    Time complexity:
        ``O(rows * columns ** 2)``
    Memory complexity:
        ``O(rows * columns)``

    where ``rows, columns = design.shape``.

    Reference:
        https://en.wikipedia.org/wiki/QR_decomposition#Using_for_solution_to_linear_inverse_problems

    :param design: full column rank matrix with at least as many rows.
    :param targets: vector with ``len(design)`` entries.
    :param name: name of the fit to report on ill-conditioning.
    :returns: coefficients minimizing residual norm.

    >>> import numpy as np
    >>> np.allclose(lstsq(np.eye(3), np.array([1., 2., 3.])), [1., 2., 3.])
    True
    """
    design = _np.asarray(design, dtype=_np.float64)
    targets = _np.asarray(targets, dtype=_np.float64)
    if design.ndim != 2 or targets.shape != (len(design),):
        raise ValueError('Design of shape {} does not match targets '
                         'of shape {}.'.format(design.shape, targets.shape))
    rows_count, columns_count = design.shape
    if rows_count < columns_count:
        raise ValueError('{}: {} rows are fewer than {} columns.'
                         .format(name, rows_count, columns_count))
    if not (_np.isfinite(design).all() and _np.isfinite(targets).all()):
        raise _NonFiniteError('{}: non-finite input.'.format(name))
    orthogonal, triangular = _np.linalg.qr(design)
    condition = condition_number(triangular)
    if condition > MAX_CONDITION_NUMBER:
        raise _IllConditionedError(
                '{}: condition number {:.3e} exceeds {:.0e}.'
                .format(name, condition, MAX_CONDITION_NUMBER))
    return _np.linalg.solve(triangular, orthogonal.T @ targets)


def pairwise_outer_sum(rows: Mat,
                       *,
                       scale: _Optional[float] = None) -> Mat:
    """
    Sums outer products of rows with pairwise summation,
    optionally scaling the result, and symmetrizes it.

    Time complexity:
        ``O(count * size ** 2)``
    Memory complexity:
        ``O(log(count) * size ** 2)``

    where ``count, size = rows.shape``.
    """
    rows = _np.asarray(rows, dtype=_np.float64)
    result = _summation.pairwise_outer_sum(rows)
    if scale is not None:
        result = result * scale
    return (result + result.T) / 2.
