import struct
from functools import (lru_cache,
                       partial)
from pathlib import Path
from typing import (Callable,
                    Iterable,
                    Tuple,
                    TypeVar)

import numpy as np
from hypothesis import strategies
from hypothesis.strategies import SearchStrategy

from nnsubspace.functions import Differentiable
from nnsubspace.netcore import (Dataset,
                                DenseNetwork,
                                make_blobs,
                                split,
                                train_sgd)
from nnsubspace.numkit import (Mat,
                               Vec)

_T1 = TypeVar('_T1')
_T2 = TypeVar('_T2')
Strategy = SearchStrategy

DESK_DIMENSION = 64
DESK_CLASSES_COUNT = 4
DESK_TRAIN_COUNT = 1000
DESK_TEST_COUNT = 200
DESK_HIDDEN = (32,)
DESK_EPOCHS = 30
DESK_LEARNING_RATE = 0.1


def equivalence(left_statement: bool, right_statement: bool) -> bool:
    return left_statement is right_statement


def pack(function: Callable[..., _T2]) -> Callable[[Iterable[_T1]], _T2]:
    return partial(call, function)


def call(function: Callable[..., _T2], args: Iterable[_T1]) -> _T2:
    return function(*args)


def to_pairs(elements: Strategy[_T1]) -> Strategy[Tuple[_T1, _T1]]:
    return strategies.tuples(elements, elements)


def relative_error(estimate: float, reference: float) -> float:
    return abs(estimate - reference) / max(abs(reference), 1e-300)


def is_orthonormal(vectors: Mat, tolerance: float) -> bool:
    return bool(np.max(np.abs(vectors.T @ vectors
                              - np.eye(vectors.shape[1])),
                       initial=0.) <= tolerance)


def is_frozen(array: np.ndarray) -> bool:
    return not array.flags.writeable


def central_differences(function: Differentiable,
                        x: Vec,
                        step: float) -> Vec:
    result = np.empty(len(x))
    for index in range(len(x)):
        shift = np.zeros(len(x))
        shift[index] = step
        result[index] = ((function.value(x + shift)
                          - function.value(x - shift))
                         / (2. * step))
    return result


def characteristic_roots(matrix: Mat) -> Vec:
    return np.sort(np.roots(np.poly(matrix)).real)[::-1]


def to_symmetric_matrix(seed: int, size: int) -> Mat:
    generator = np.random.default_rng(seed)
    matrix = generator.standard_normal((size, size))
    return (matrix + matrix.T) / 2.


def to_gram_matrix(seed: int, size: int) -> Mat:
    generator = np.random.default_rng(seed)
    matrix = generator.standard_normal((size, size))
    return matrix.T @ matrix


@lru_cache(maxsize=None)
def to_desk_model() -> Tuple[DenseNetwork, Dataset]:
    """Returns network trained on synthetic clusters with held-out data."""
    data = make_blobs(DESK_DIMENSION, DESK_CLASSES_COUNT,
                      DESK_TRAIN_COUNT + DESK_TEST_COUNT, 0)
    train, test = split(data, DESK_TRAIN_COUNT)
    result = train_sgd(train, DESK_HIDDEN, DESK_EPOCHS, DESK_LEARNING_RATE,
                       0)
    return result.network, test


def write_images(path: Path,
                 pixels: np.ndarray,
                 magic: int = 0x00000803) -> None:
    count, rows, columns = pixels.shape
    path.write_bytes(struct.pack('>IIII', magic, count, rows, columns)
                     + pixels.astype(np.uint8).tobytes())


def write_labels(path: Path,
                 labels: np.ndarray,
                 magic: int = 0x00000801) -> None:
    path.write_bytes(struct.pack('>II', magic, len(labels))
                     + labels.astype(np.uint8).tobytes())
