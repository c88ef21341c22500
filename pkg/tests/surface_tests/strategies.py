from typing import Tuple

import numpy as np
from hypothesis import strategies

from nnsubspace.surface import (PolySurface,
                                nterms)
from tests.strategies import seeds

ranks = strategies.integers(1, 4)
degrees = strategies.integers(1, 3)


def to_points_with_values(seed: int,
                          rank: int,
                          degree: int) -> Tuple[np.ndarray, np.ndarray, int]:
    generator = np.random.default_rng(seed)
    count = 3 * nterms(rank, degree) + generator.integers(0, 20)
    points = generator.standard_normal((count, rank))
    values = (np.sin(points).sum(axis=1)
              + 0.1 * generator.standard_normal(count))
    return points, values, degree


def to_surface_with_points(seed: int,
                           rank: int,
                           degree: int) -> Tuple[PolySurface, np.ndarray]:
    generator = np.random.default_rng(seed)
    return (PolySurface(rank, degree,
                        generator.standard_normal(nterms(rank, degree))),
            generator.standard_normal((10, rank)))


points_with_values = strategies.builds(to_points_with_values, seeds, ranks,
                                       degrees)
surfaces_with_points = strategies.builds(to_surface_with_points, seeds,
                                         ranks, degrees)
