"""Scalar differentiable functions of an input vector."""

import threading as _threading
from typing import Protocol as _Protocol

import numpy as _np
from reprit.base import generate_repr as _generate_repr

from .netcore import (DenseNetwork as _DenseNetwork,
                      QoISpec as _QoISpec)
from .numkit import (Mat as _Mat,
                     Vec as _Vec)


class Differentiable(_Protocol):
    """Represents scalar function with gradient."""

    @property
    def dimension(self) -> int:
        """Length of input vectors."""

    def value(self, x: _Vec) -> float:
        """Evaluates function at the given input."""

    def values(self, xs: _Mat) -> _Vec:
        """Evaluates function at each row of the given matrix."""

    def gradient(self, x: _Vec) -> _Vec:
        """Evaluates gradient at the given input."""


class NetworkScore:
    """Represents quantity of interest of a network."""

    __slots__ = '_network', '_spec'

    def __init__(self, network: _DenseNetwork, spec: _QoISpec) -> None:
        if spec.class_index >= network.output_dim:
            raise ValueError('Class index {} is out of range for {} classes.'
                             .format(spec.class_index, network.output_dim))
        self._network, self._spec = network, spec

    __repr__ = _generate_repr(__init__)

    @property
    def dimension(self) -> int:
        return self._network.input_dim

    @property
    def network(self) -> _DenseNetwork:
        return self._network

    @property
    def spec(self) -> _QoISpec:
        return self._spec

    def value(self, x: _Vec) -> float:
        return self._network.qoi(x, self._spec)

    def values(self, xs: _Mat) -> _Vec:
        return self._network.qoi_many(xs, self._spec)

    def gradient(self, x: _Vec) -> _Vec:
        return self._network.grad_qoi(x, self._spec)


class Linear:
    """
    Represents ``f(x) = a^T x + b``.

    >>> import numpy as np
    >>> Linear(np.array([1., 2.]), 3.).value(np.array([1., 1.]))
    6.0
    """

    __slots__ = '_coefficients', '_intercept'

    def __init__(self, coefficients: _Vec, intercept: float = 0.) -> None:
        self._coefficients = _np.array(coefficients, dtype=_np.float64)
        self._coefficients.setflags(write=False)
        self._intercept = float(intercept)

    __repr__ = _generate_repr(__init__)

    @property
    def coefficients(self) -> _Vec:
        return self._coefficients

    @property
    def dimension(self) -> int:
        return len(self._coefficients)

    @property
    def intercept(self) -> float:
        return self._intercept

    def value(self, x: _Vec) -> float:
        return float(self._coefficients @ x) + self._intercept

    def values(self, xs: _Mat) -> _Vec:
        return _np.asarray(xs) @ self._coefficients + self._intercept

    def gradient(self, x: _Vec) -> _Vec:
        return self._coefficients.copy()


class Quadratic:
    """
    Represents ``f(x) = x^T diag(a)^2 x / 2``
    with gradient ``diag(a)^2 x``.

    >>> import numpy as np
    >>> Quadratic(np.array([2., 1.])).value(np.array([1., 1.]))
    2.5
    """

    __slots__ = '_scales', '_squared_scales'

    def __init__(self, scales: _Vec) -> None:
        self._scales = _np.array(scales, dtype=_np.float64)
        self._scales.setflags(write=False)
        self._squared_scales = self._scales ** 2

    __repr__ = _generate_repr(__init__)

    @property
    def dimension(self) -> int:
        return len(self._scales)

    @property
    def scales(self) -> _Vec:
        return self._scales

    def value(self, x: _Vec) -> float:
        return float(self._squared_scales @ (_np.asarray(x) ** 2)) / 2.

    def values(self, xs: _Mat) -> _Vec:
        return (_np.asarray(xs) ** 2) @ self._squared_scales / 2.

    def gradient(self, x: _Vec) -> _Vec:
        return self._squared_scales * x


class Counted:
    """
    Represents function wrapper counting its evaluations,
    each row of a batch counts as a separate value call.
    """

    __slots__ = '_function', '_gradient_calls', '_lock', '_value_calls'

    def __init__(self, function: Differentiable) -> None:
        self._function = function
        self._gradient_calls = self._value_calls = 0
        self._lock = _threading.Lock()

    __repr__ = _generate_repr(__init__)

    @property
    def dimension(self) -> int:
        return self._function.dimension

    @property
    def function(self) -> Differentiable:
        return self._function

    @property
    def gradient_calls(self) -> int:
        return self._gradient_calls

    @property
    def value_calls(self) -> int:
        return self._value_calls

    def value(self, x: _Vec) -> float:
        with self._lock:
            self._value_calls += 1
        return self._function.value(x)

    def values(self, xs: _Mat) -> _Vec:
        with self._lock:
            self._value_calls += len(xs)
        return self._function.values(xs)

    def gradient(self, x: _Vec) -> _Vec:
        with self._lock:
            self._gradient_calls += 1
        return self._function.gradient(x)
