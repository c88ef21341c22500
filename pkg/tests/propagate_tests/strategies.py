import numpy as np
from hypothesis import strategies

from nnsubspace.functions import Linear
from nnsubspace.subspace import NoiseModel
from tests.strategies import seeds

UNBOUNDED = (-np.inf, np.inf)

bins = strategies.integers(1, 100)
values_arrays = strategies.builds(
        lambda seed, size: np.random.default_rng(seed).standard_normal(size),
        seeds, strategies.integers(1, 500))
sigmas = strategies.floats(0., 2.)


def to_linear_problem(dimension: int,
                      sigma: float = 1.) -> tuple:
    coefficients = np.linspace(1., 2., dimension)
    return (Linear(coefficients),
            NoiseModel(np.full(dimension, 10.), sigma, UNBOUNDED))
