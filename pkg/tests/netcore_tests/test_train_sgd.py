from typing import Tuple

import numpy as np
import pytest
from hypothesis import (given,
                        settings)

from nnsubspace.errors import DivergenceError
from nnsubspace.netcore import (Dataset,
                                DenseNetwork,
                                TrainingResult,
                                accuracy,
                                initialize,
                                layers_sizes,
                                make_blobs,
                                train_sgd)
from tests.utils import (DESK_CLASSES_COUNT,
                         to_desk_model)
from . import strategies


@given(strategies.datasets_with_epochs)
@settings(max_examples=20)
def test_basic(dataset_with_epochs: Tuple[Dataset, int]) -> None:
    data, epochs = dataset_with_epochs

    result = train_sgd(data, [3], epochs, 0.1, 0)

    assert isinstance(result, TrainingResult)
    assert isinstance(result.network, DenseNetwork)
    assert result.network.input_dim == data.dimension
    assert result.network.output_dim == data.classes_count
    assert len(result.losses) == epochs


@given(strategies.datasets_with_epochs)
@settings(max_examples=20)
def test_properties(dataset_with_epochs: Tuple[Dataset, int]) -> None:
    data, epochs = dataset_with_epochs

    result = train_sgd(data, [3], epochs, 0.1, 0)

    assert result.network == train_sgd(data, [3], epochs, 0.1, 0).network
    assert 0. <= result.accuracy <= 1.
    assert result.accuracy == accuracy(result.network, data)


def to_separable_data() -> Dataset:
    generator = np.random.default_rng(0)
    labels = np.arange(200) % 2
    centers = np.array([[0.25, 0.25], [0.75, 0.75]])
    inputs = np.clip(centers[labels]
                     + 0.05 * generator.standard_normal((200, 2)),
                     0., 1.)
    return Dataset(inputs, labels, (0., 1.))


def test_separable() -> None:
    result = train_sgd(to_separable_data(), [4], 200, 0.5, 0)

    assert result.accuracy >= 0.95


@pytest.mark.parametrize('bounds', [(0., 1.), (0., 255.), (-1., 3.)])
def test_zero_epochs(bounds: Tuple[float, float]) -> None:
    data = make_blobs(4, 2, 20, 0,
                      bounds=bounds)

    result = train_sgd(data, [4, 3], 0, 0.5, 7)

    assert result.network == initialize(layers_sizes(4, [4, 3], 2), 7)
    assert result.losses == ()


def test_full_batch_monotonicity() -> None:
    data = to_separable_data()

    result = train_sgd(data, [], 50, 0.05, 0,
                       batch_size=len(data))

    losses = np.array(result.losses)
    assert np.all(losses[1:] <= losses[:-1] + 1e-12)


def test_divergence() -> None:
    data = to_separable_data()

    with pytest.raises(DivergenceError,
                       match='epoch'):
        train_sgd(data, [8], 5, 1e300, 0)


def test_desk_model() -> None:
    network, test_data = to_desk_model()

    assert network.output_dim == DESK_CLASSES_COUNT
    assert accuracy(network, test_data) >= 0.95


def test_empty() -> None:
    data = Dataset(np.zeros((0, 2)), [], (0., 1.), 2)

    with pytest.raises(ValueError):
        train_sgd(data, [2], 1, 0.1, 0)
