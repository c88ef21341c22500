import numpy as np
from hypothesis import given

from nnsubspace.numkit import pairwise_outer_sum
from . import strategies


@given(strategies.rows_matrices)
def test_basic(rows: np.ndarray) -> None:
    result = pairwise_outer_sum(rows)

    assert isinstance(result, np.ndarray)
    assert result.shape == (rows.shape[1], rows.shape[1])


@given(strategies.rows_matrices)
def test_properties(rows: np.ndarray) -> None:
    result = pairwise_outer_sum(rows,
                                scale=1. / len(rows))

    assert np.array_equal(result, result.T)
    assert np.allclose(result, rows.T @ rows / len(rows),
                       rtol=1e-12,
                       atol=1e-12)


@given(strategies.rows_matrices)
def test_permutation(rows: np.ndarray) -> None:
    permuted = rows[np.random.default_rng(len(rows)).permutation(len(rows))]

    result = pairwise_outer_sum(rows)

    scale = max(1., float(np.max(np.abs(result))))
    assert np.allclose(pairwise_outer_sum(permuted), result,
                       rtol=0.,
                       atol=1e-12 * scale * len(rows))
