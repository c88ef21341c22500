from typing import Tuple

import numpy as np
import pytest
from hypothesis import given

from nnsubspace.errors import IllConditionedError
from nnsubspace.numkit import lstsq
from . import strategies


@given(strategies.designs_with_coefficients)
def test_basic(design_with_coefficients: Tuple[np.ndarray, np.ndarray]
               ) -> None:
    design, coefficients = design_with_coefficients

    result = lstsq(design, design @ coefficients)

    assert isinstance(result, np.ndarray)
    assert result.shape == coefficients.shape


@given(strategies.designs_with_coefficients)
def test_properties(design_with_coefficients: Tuple[np.ndarray, np.ndarray]
                    ) -> None:
    design, coefficients = design_with_coefficients
    generator = np.random.default_rng(len(design))
    targets = design @ coefficients + generator.standard_normal(len(design))

    result = lstsq(design, targets)

    residual = targets - design @ result
    assert (np.max(np.abs(design.T @ residual))
            <= 1e-8 * np.linalg.norm(targets) * np.linalg.norm(design))


@given(strategies.designs_with_coefficients)
def test_orthogonal_perturbation(design_with_coefficients
                                 : Tuple[np.ndarray, np.ndarray]) -> None:
    design, coefficients = design_with_coefficients
    targets = design @ coefficients
    orthogonal, _ = np.linalg.qr(design,
                                 mode='complete')
    complement = orthogonal[:, design.shape[1]:]
    perturbation = complement @ np.ones(complement.shape[1])

    result = lstsq(design, targets + perturbation)

    assert np.allclose(result, lstsq(design, targets),
                       rtol=0.,
                       atol=1e-9 * max(1., np.linalg.norm(coefficients)))


def test_identity() -> None:
    assert np.allclose(lstsq(np.eye(3), np.array([1., 2., 3.])),
                       [1., 2., 3.])


def test_exactly_determined() -> None:
    design = np.array([[2., 1.], [1., 3.]])

    assert np.allclose(lstsq(design, np.array([3., 5.])),
                       np.linalg.solve(design, np.array([3., 5.])))


def test_overdetermined_recovery() -> None:
    generator = np.random.default_rng(0)
    design = generator.standard_normal((10, 3))
    coefficients = np.array([1.5, -2., 0.25])

    assert np.allclose(lstsq(design, design @ coefficients), coefficients,
                       rtol=0.,
                       atol=1e-10)


def test_rank_deficient() -> None:
    design = np.ones((5, 2))

    with pytest.raises(IllConditionedError,
                       match='surface fit'):
        lstsq(design, np.arange(5.),
              name='surface fit')


def test_underdetermined() -> None:
    with pytest.raises(ValueError):
        lstsq(np.ones((1, 2)), np.ones(1))
