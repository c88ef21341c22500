"""
Polynomial response surfaces over active variables.

Monomials are ordered by total degree, then lexicographically
with earlier variables first,
e.g. ``1, u, v, u**2, u*v, v**2`` for two variables of degree 2.
"""

from itertools import combinations_with_replacement as _combinations
from math import comb as _comb
from typing import (List as _List,
                    Tuple as _Tuple)

import numpy as _np
from reprit.base import generate_repr as _generate_repr

from .core import io as _io
from .errors import (InsufficientSamplesError as _InsufficientSamplesError,
                     ZeroVarianceError as _ZeroVarianceError)
from .numkit import (Mat as _Mat,
                     Vec as _Vec,
                     lstsq as _lstsq)

NEGLIGIBLE_SQUARES_SUM = 1e-24
NEGLIGIBLE_RESIDUAL = 1e-12


def nterms(rank: int, degree: int) -> int:
    """
    Returns number of monomials of total degree up to ``degree``
    in ``rank`` variables.

    >>> nterms(2, 2)
    6
    """
    return _comb(rank + degree, degree)


def monomials(rank: int, degree: int) -> _List[_Tuple[int, ...]]:
    """
    Returns exponents of monomials in basis order.

    >>> monomials(2, 2)
    [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    """
    return [tuple(indices.count(variable) for variable in range(rank))
            for total in range(degree + 1)
            for indices in _combinations(range(rank), total)]


def _factors(rank: int, degree: int) -> _List[_Tuple[int, ...]]:
    return [indices
            for total in range(degree + 1)
            for indices in _combinations(range(rank), total)]


def design_matrix(points: _Mat, degree: int) -> _Mat:
    """Returns monomials evaluated at each row of the given matrix."""
    points = _np.asarray(points, dtype=_np.float64)
    if points.ndim != 2 or not points.shape[1]:
        raise ValueError('Points should form matrix with at least one '
                         'column, but found shape: {}.'.format(points.shape))
    if degree < 1:
        raise ValueError('Degree should be positive, '
                         'but found: {}.'.format(degree))
    return _np.column_stack([_np.prod(points[:, list(indices)],
                                      axis=1)
                             for indices in _factors(points.shape[1],
                                                     degree)])


def poly_features(point: _Vec, degree: int) -> _Vec:
    """
    Returns monomials evaluated at the given point.

    >>> import numpy as np
    >>> poly_features(np.array([2., 3.]), 2).tolist()
    [1.0, 2.0, 3.0, 4.0, 6.0, 9.0]
    """
    return design_matrix(_np.asarray(point, dtype=_np.float64)[None, :],
                         degree)[0]


class PolySurface:
    """Represents polynomial of active variables with fit diagnostics."""

    __slots__ = ('_coefficients', '_degree', '_r_squared', '_rank',
                 '_residual_rms')

    def __init__(self,
                 rank: int,
                 degree: int,
                 coefficients: _Vec,
                 residual_rms: float = 0.,
                 r_squared: float = 1.) -> None:
        coefficients = _np.array(coefficients, dtype=_np.float64)
        coefficients.setflags(write=False)
        if coefficients.shape != (nterms(rank, degree),):
            raise ValueError('Rank {} and degree {} require {} coefficients, '
                             'but found shape: {}.'
                             .format(rank, degree, nterms(rank, degree),
                                     coefficients.shape))
        if not _np.isfinite(coefficients).all():
            raise ValueError('Coefficients should be finite.')
        self._coefficients, self._degree, self._rank = (coefficients, degree,
                                                        rank)
        self._r_squared, self._residual_rms = r_squared, residual_rms

    __repr__ = _generate_repr(__init__)

    @property
    def coefficients(self) -> _Vec:
        return self._coefficients

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def r_squared(self) -> float:
        """Coefficient of determination on the training samples."""
        return self._r_squared

    @property
    def rank(self) -> int:
        return self._rank

    @property
    def residual_rms(self) -> float:
        """Root mean square of training residuals."""
        return self._residual_rms

    def evaluate(self, point: _Vec) -> float:
        """
        Evaluates surface at the given active variables.

        >>> import numpy as np
        >>> PolySurface(1, 2, [2., 3., -1.]).evaluate(np.array([1.]))
        4.0
        """
        point = _np.asarray(point, dtype=_np.float64)
        if point.shape != (self._rank,):
            raise ValueError('Point should have shape ({},), '
                             'but found: {}.'.format(self._rank,
                                                     point.shape))
        return float(poly_features(point, self._degree) @ self._coefficients)

    def evaluate_many(self, points: _Mat) -> _Vec:
        """Evaluates surface at each row of the given matrix."""
        points = _np.asarray(points, dtype=_np.float64)
        if points.ndim != 2 or points.shape[1] != self._rank:
            raise ValueError('Points should have shape (count, {}), '
                             'but found: {}.'.format(self._rank,
                                                     points.shape))
        return design_matrix(points, self._degree) @ self._coefficients

    def held_out_r_squared(self, points: _Mat, values: _Vec) -> float:
        """
        Returns ``1 - SS_res / SS_tot`` on the given samples,
        negative for predictors worse than the mean.
        """
        values = _np.asarray(values, dtype=_np.float64)
        if not len(values):
            raise ValueError('Held-out samples should be non-empty.')
        residuals = values - self.evaluate_many(points)
        total = float(_np.sum((values - _np.mean(values)) ** 2))
        if total <= NEGLIGIBLE_SQUARES_SUM:
            if _np.max(_np.abs(residuals)) <= NEGLIGIBLE_RESIDUAL:
                return 1.
            raise _ZeroVarianceError('Held-out values are constant, '
                                     'but residuals are not negligible.')
        return 1. - float(_np.sum(residuals ** 2)) / total


def fit(points: _Mat, values: _Vec, degree: int = 2) -> PolySurface:
    """
    Fits polynomial by least squares.

    Time complexity:
        ``O(count * nterms ** 2)``
    Memory complexity:
        ``O(count * nterms)``

    where ``count = len(points)``, ``nterms = nterms(rank, degree)``.

    :param points: active variables as matrix rows.
    :param values: observed quantity at each point.
    :param degree: positive total degree.
    :returns: fitted surface with training diagnostics.

    >>> import numpy as np
    >>> points = np.linspace(-1., 1., 5)[:, None]
    >>> values = 2. + 3. * points[:, 0] - points[:, 0] ** 2
    >>> np.allclose(fit(points, values).coefficients, [2., 3., -1.])
    True
    """
    points = _np.asarray(points, dtype=_np.float64)
    design = design_matrix(points, degree)
    values = _np.asarray(values, dtype=_np.float64)
    rank = points.shape[1]
    if len(values) < design.shape[1]:
        raise _InsufficientSamplesError(
                'Fit of degree {} in {} variables needs at least {} samples, '
                'but found: {}.'.format(degree, rank, design.shape[1],
                                        len(values)))
    coefficients = _lstsq(design, values,
                          name='degree {} surface in {} variables'
                          .format(degree, rank))
    residuals = values - design @ coefficients
    residuals_squares_sum = float(_np.sum(residuals ** 2))
    total = float(_np.sum((values - _np.mean(values)) ** 2))
    if total <= NEGLIGIBLE_SQUARES_SUM:
        if residuals_squares_sum > NEGLIGIBLE_SQUARES_SUM:
            raise _ZeroVarianceError('Training values are constant, '
                                     'but residuals are not negligible.')
        r_squared = 1.
    else:
        r_squared = 1. - residuals_squares_sum / total
    return PolySurface(rank, degree, coefficients,
                       _np.sqrt(residuals_squares_sum / len(values)),
                       r_squared)


def curve(surface: PolySurface,
          low: float,
          high: float,
          count: int = 101) -> _Tuple[_Vec, _Vec]:
    """
    Samples surface along the first active variable
    with the others at zero.
    """
    abscissas = _np.linspace(low, high, count)
    points = _np.zeros((count, surface.rank))
    points[:, 0] = abscissas
    return abscissas, surface.evaluate_many(points)


def to_dict(surface: PolySurface) -> dict:
    return {'rank': surface.rank,
            'degree': surface.degree,
            'monomials': [list(exponents)
                          for exponents in monomials(surface.rank,
                                                     surface.degree)],
            'coefficients': [float(coefficient)
                             for coefficient in surface.coefficients],
            'r_squared': _io.to_number(surface.r_squared),
            'residual_rms': _io.to_number(surface.residual_rms)}


def write_surface_json(surface: PolySurface, path: str) -> None:
    """Writes surface with its monomial exponents in basis order."""
    _io.write_json(path, to_dict(surface))


def write_curve_csv(surface: PolySurface,
                    low: float,
                    high: float,
                    path: str,
                    count: int = 101) -> None:
    abscissas, values = curve(surface, low, high, count)
    _io.write_csv(path, ['x1', 'g'], [abscissas, values],
                  [_io.FLOAT_FORMAT, _io.FLOAT_FORMAT])
