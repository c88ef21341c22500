import numpy as np
from hypothesis import given

from nnsubspace.numkit import RandomSource
from nnsubspace.subspace import (NoiseModel,
                                 draw_noise,
                                 draw_noise_many)
from tests.strategies import seeds
from . import strategies


@given(strategies.noise_models, strategies.sources)
def test_basic(noise_model: NoiseModel, source: RandomSource) -> None:
    result = draw_noise(noise_model, source)

    assert isinstance(result, tuple)
    noise, x = result
    assert noise.shape == x.shape == (noise_model.dimension,)


@given(strategies.noise_models, seeds)
def test_properties(noise_model: NoiseModel, seed: int) -> None:
    noise, x = draw_noise(noise_model, RandomSource(seed))

    low, high = noise_model.bounds
    assert np.array_equal(x, np.clip(noise_model.center
                                     + noise_model.sigma * noise,
                                     low, high))
    assert np.all((x >= low) & (x <= high))
    assert np.array_equal(draw_noise(noise_model, RandomSource(seed))[1], x)


@given(strategies.noise_models, seeds)
def test_noise_free(noise_model: NoiseModel, seed: int) -> None:
    _, x = draw_noise(noise_model.with_sigma(0.), RandomSource(seed))

    assert np.array_equal(x, noise_model.center)


def test_upper_bound() -> None:
    noise_model = NoiseModel(np.full(10, 255.), 50.)

    _, xs = draw_noise_many(noise_model, RandomSource(0), 1000)

    assert np.all(xs <= 255.)


def test_interior_mean() -> None:
    sigma = 1.
    noise_model = NoiseModel(np.array([100., 128., 150.]), sigma)

    _, xs = draw_noise_many(noise_model, RandomSource(0), 10 ** 5)

    assert np.all(np.abs(xs.mean(axis=0) - noise_model.center)
                  <= 0.02 * sigma)
