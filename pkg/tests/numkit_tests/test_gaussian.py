from typing import Tuple

import numpy as np
from hypothesis import given

from nnsubspace.numkit import (RandomSource,
                               gaussian)
from . import strategies


@given(strategies.sources_with_counts)
def test_basic(source_with_count: Tuple[RandomSource, int]) -> None:
    source, count = source_with_count

    result = gaussian(source, count)

    assert isinstance(result, np.ndarray)
    assert result.shape == (count,)
    assert np.isfinite(result).all()


@given(strategies.seeds_pairs)
def test_properties(seeds_pair: Tuple[int, int]) -> None:
    seed, other_seed = seeds_pair

    assert np.array_equal(gaussian(RandomSource(seed), 5),
                          gaussian(RandomSource(seed), 5))
    assert not np.array_equal(gaussian(RandomSource(seed), 5),
                              gaussian(RandomSource(other_seed), 5))


def test_moments() -> None:
    draws = gaussian(RandomSource(0), 10 ** 5)

    assert abs(np.mean(draws)) <= 0.02
    assert abs(np.var(draws) - 1.) <= 0.03


def test_successive_seeds() -> None:
    assert not np.array_equal(gaussian(RandomSource(11), 5),
                              gaussian(RandomSource(12), 5))
