from typing import (Any,
                    Tuple)

import numpy as np
from hypothesis import given

from nnsubspace.functions import (Linear,
                                  Quadratic)
from tests.utils import central_differences
from . import strategies


@given(strategies.functions_with_inputs)
def test_basic(function_with_input: Tuple[Any, np.ndarray]) -> None:
    function, x = function_with_input

    value, gradient = function.value(x), function.gradient(x)

    assert isinstance(value, float)
    assert isinstance(gradient, np.ndarray)
    assert gradient.shape == (function.dimension,)


@given(strategies.functions_with_inputs)
def test_properties(function_with_input: Tuple[Any, np.ndarray]) -> None:
    function, x = function_with_input

    gradient = function.gradient(x)

    assert np.allclose(gradient, central_differences(function, x, 1e-5),
                       rtol=1e-6,
                       atol=1e-6)
    assert np.allclose(function.values(np.stack([x, -x]))[0],
                       function.value(x))


@given(strategies.linears_with_inputs)
def test_linear_closed_form(linear_with_input: Tuple[Linear, np.ndarray]
                            ) -> None:
    linear, x = linear_with_input

    assert np.isclose(linear.value(x),
                      float(linear.coefficients @ x) + linear.intercept)
    assert np.array_equal(linear.gradient(x), linear.coefficients)


@given(strategies.quadratics_with_inputs)
def test_quadratic_closed_form(quadratic_with_input
                               : Tuple[Quadratic, np.ndarray]) -> None:
    quadratic, x = quadratic_with_input

    assert np.isclose(quadratic.value(x),
                      0.5 * float(np.sum((quadratic.scales * x) ** 2)))
    assert np.allclose(quadratic.gradient(x), quadratic.scales ** 2 * x)
