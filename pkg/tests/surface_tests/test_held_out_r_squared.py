from typing import Tuple

import numpy as np
import pytest
from hypothesis import given

from nnsubspace.errors import ZeroVarianceError
from nnsubspace.surface import (PolySurface,
                                fit)
from . import strategies


@given(strategies.surfaces_with_points)
def test_basic(surface_with_points: Tuple[PolySurface, np.ndarray]) -> None:
    surface, points = surface_with_points

    result = surface.held_out_r_squared(points,
                                        np.arange(len(points),
                                                  dtype=float))

    assert isinstance(result, float)
    assert result <= 1.


@given(strategies.surfaces_with_points)
def test_properties(surface_with_points: Tuple[PolySurface, np.ndarray]
                    ) -> None:
    surface, points = surface_with_points
    values = surface.evaluate_many(points)

    result = surface.held_out_r_squared(points, values)

    assert result == 1.


def test_mean_predictor() -> None:
    points = np.linspace(-1., 1., 5)[:, None]
    values = points[:, 0] ** 2
    surface = PolySurface(1, 2, [float(np.mean(values)), 0., 0.])

    assert surface.held_out_r_squared(points, values) == pytest.approx(0.)


def test_worse_than_mean() -> None:
    points = np.linspace(-1., 1., 5)[:, None]
    surface = PolySurface(1, 1, [0., -1.])

    assert surface.held_out_r_squared(points, points[:, 0]) < 0.


def test_generalization() -> None:
    generator = np.random.default_rng(0)
    train_points = generator.standard_normal((200, 1))
    test_points = generator.standard_normal((100, 1))
    surface = fit(train_points, np.exp(train_points[:, 0] / 4.))

    result = surface.held_out_r_squared(test_points,
                                        np.exp(test_points[:, 0] / 4.))

    assert result >= 0.99


def test_constant_values() -> None:
    points = np.linspace(-1., 1., 5)[:, None]

    assert PolySurface(1, 1, [3., 0.]).held_out_r_squared(
            points, np.full(5, 3.)) == 1.
    with pytest.raises(ZeroVarianceError):
        PolySurface(1, 1, [3., 1.]).held_out_r_squared(points,
                                                       np.full(5, 3.))
