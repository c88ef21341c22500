from typing import Tuple

import numpy as np
from hypothesis import strategies

from nnsubspace.functions import (Linear,
                                  Quadratic)
from tests.strategies import (dimensions,
                              finite_floats,
                              seeds)


def to_linear_with_input(seed: int,
                         dimension: int,
                         intercept: float) -> Tuple[Linear, np.ndarray]:
    generator = np.random.default_rng(seed)
    return (Linear(generator.standard_normal(dimension), intercept),
            generator.standard_normal(dimension))


def to_quadratic_with_input(seed: int,
                            dimension: int) -> Tuple[Quadratic, np.ndarray]:
    generator = np.random.default_rng(seed)
    return (Quadratic(generator.uniform(0.1, 3., dimension)),
            generator.standard_normal(dimension))


linears_with_inputs = strategies.builds(to_linear_with_input, seeds,
                                        dimensions, finite_floats)
quadratics_with_inputs = strategies.builds(to_quadratic_with_input, seeds,
                                           dimensions)
functions_with_inputs = linears_with_inputs | quadratics_with_inputs
