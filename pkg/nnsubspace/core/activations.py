import numpy as np


def softplus(values: np.ndarray) -> np.ndarray:
    return np.maximum(values, 0.) + np.log1p(np.exp(-np.abs(values)))


def sigmoid(values: np.ndarray) -> np.ndarray:
    exponents = np.exp(-np.abs(values))
    return np.where(values >= 0., 1. / (1. + exponents),
                    exponents / (1. + exponents))


def softmax(logits: np.ndarray) -> np.ndarray:
    exponents = np.exp(logits - np.max(logits, axis=-1, keepdims=True))
    return exponents / np.sum(exponents, axis=-1, keepdims=True)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - np.max(logits, axis=-1, keepdims=True)
    return shifted - np.log(np.sum(np.exp(shifted), axis=-1, keepdims=True))
