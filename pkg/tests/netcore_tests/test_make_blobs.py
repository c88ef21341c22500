import numpy as np
from hypothesis import given

from nnsubspace.netcore import (Dataset,
                                make_blobs)
from tests.strategies import seeds


@given(seeds)
def test_basic(seed: int) -> None:
    result = make_blobs(5, 3, 30, seed)

    assert isinstance(result, Dataset)
    assert len(result) == 30
    assert result.dimension == 5
    assert result.classes_count == 3


@given(seeds)
def test_properties(seed: int) -> None:
    result = make_blobs(5, 3, 30, seed,
                        spread=0.5,
                        bounds=(-1., 1.))

    assert result.bounds == (-1., 1.)
    assert np.all((result.inputs >= -1.) & (result.inputs <= 1.))
    assert np.bincount(result.labels).tolist() == [10, 10, 10]
    assert np.array_equal(make_blobs(5, 3, 30, seed,
                                     spread=0.5,
                                     bounds=(-1., 1.)).inputs,
                          result.inputs)
