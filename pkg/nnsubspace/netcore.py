"""Differentiable fully-connected networks with softplus activations."""

import enum as _enum
import logging as _logging
from math import (isqrt as _isqrt,
                  sqrt as _sqrt)
from typing import (List as _List,
                    Optional as _Optional,
                    Sequence as _Sequence,
                    Tuple as _Tuple)

import numpy as _np
from reprit.base import generate_repr as _generate_repr

from .core import (activations as _activations,
                   codecs as _codecs)
from .errors import (DivergenceError as _DivergenceError,
                     FormatError as _FormatError)
from .numkit import (Mat as _Mat,
                     RandomSource as _RandomSource,
                     Vec as _Vec)

_logger = _logging.getLogger(__name__)

Bounds = _Tuple[float, float]
PIXEL_BOUNDS = (0., 255.)


class Activation(_enum.IntEnum):
    IDENTITY = 0
    SOFTPLUS = 1


class ScoreKind(str, _enum.Enum):
    SOFTMAX_PROBABILITY = 'softmax_probability'
    LOGIT = 'logit'


def _frozen(values: _np.ndarray) -> _np.ndarray:
    result = _np.array(values, dtype=_np.float64)
    result.setflags(write=False)
    return result


class Layer:
    """Represents affine map followed by elementwise activation."""

    __slots__ = '_activation', '_biases', '_weights'

    def __init__(self,
                 weights: _Mat,
                 biases: _Vec,
                 activation: Activation) -> None:
        weights, biases = _frozen(weights), _frozen(biases)
        if weights.ndim != 2 or biases.shape != (len(weights),):
            raise ValueError('Weights of shape {} do not match biases '
                             'of shape {}.'.format(weights.shape,
                                                   biases.shape))
        if not (_np.isfinite(weights).all() and _np.isfinite(biases).all()):
            raise ValueError('Layer parameters should be finite.')
        self._activation, self._biases, self._weights = (
            Activation(activation), biases, weights)

    __repr__ = _generate_repr(__init__)

    def __eq__(self, other: 'Layer') -> bool:
        return (self._activation is other._activation
                and _np.array_equal(self._weights, other._weights)
                and _np.array_equal(self._biases, other._biases)
                if isinstance(other, Layer)
                else NotImplemented)

    @property
    def activation(self) -> Activation:
        return self._activation

    @property
    def biases(self) -> _Vec:
        return self._biases

    @property
    def inputs_count(self) -> int:
        return self._weights.shape[1]

    @property
    def outputs_count(self) -> int:
        return self._weights.shape[0]

    @property
    def weights(self) -> _Mat:
        return self._weights


class QoISpec:
    """Represents choice of the scalar network output under study."""

    __slots__ = '_class_index', '_score_kind'

    def __init__(self,
                 class_index: int,
                 score_kind: ScoreKind = ScoreKind.SOFTMAX_PROBABILITY
                 ) -> None:
        if class_index < 0:
            raise ValueError('Class index should be non-negative, '
                             'but found: {}.'.format(class_index))
        self._class_index, self._score_kind = (class_index,
                                               ScoreKind(score_kind))

    __repr__ = _generate_repr(__init__)

    @property
    def class_index(self) -> int:
        return self._class_index

    @property
    def score_kind(self) -> ScoreKind:
        return self._score_kind


class DenseNetwork:
    """
    Represents feed-forward network of dense layers
    with logits as output.
    """

    __slots__ = '_layers',

    def __init__(self, layers: _Sequence[Layer]) -> None:
        """
        Initializes network from layers.

        Time complexity:
            ``O(len(layers))``
        Memory complexity:
            ``O(1)``
        """
        if not layers:
            raise ValueError('Network should have at least one layer.')
        for index, (layer, next_layer) in enumerate(zip(layers,
                                                        layers[1:])):
            if layer.outputs_count != next_layer.inputs_count:
                raise ValueError('Layer {} has {} outputs, but next layer '
                                 'has {} inputs.'
                                 .format(index, layer.outputs_count,
                                         next_layer.inputs_count))
        if layers[-1].activation is not Activation.IDENTITY:
            raise ValueError('Final layer should output logits.')
        self._layers = tuple(layers)

    __repr__ = _generate_repr(__init__)

    def __eq__(self, other: 'DenseNetwork') -> bool:
        return (self._layers == other._layers
                if isinstance(other, DenseNetwork)
                else NotImplemented)

    @property
    def input_dim(self) -> int:
        return self._layers[0].inputs_count

    @property
    def layers(self) -> _Sequence[Layer]:
        return self._layers

    @property
    def output_dim(self) -> int:
        return self._layers[-1].outputs_count

    def forward(self, x: _Vec) -> _Vec:
        """
        Evaluates logits at the given input.

        Time complexity:
            ``O(parameters_count)``
        Memory complexity:
            ``O(max_width)``

        :param x: input vector of length ``self.input_dim``.
        :returns: logits vector of length ``self.output_dim``.

        >>> import numpy as np
        >>> network = DenseNetwork([Layer(np.eye(2), np.zeros(2),
        ...                               Activation.IDENTITY)])
        >>> network.forward(np.array([1., 2.])).tolist()
        [1.0, 2.0]
        """
        return self.forward_many(self._validate_input(x)[None, :])[0]

    def forward_many(self, xs: _Mat) -> _Mat:
        """Evaluates logits for each row of the given matrix."""
        activations = _np.asarray(xs, dtype=_np.float64)
        if activations.ndim != 2 or activations.shape[1] != self.input_dim:
            raise ValueError('Inputs should have shape (count, {}), '
                             'but found: {}.'.format(self.input_dim,
                                                     activations.shape))
        for layer in self._layers:
            activations = _activate(layer,
                                    activations @ layer.weights.T
                                    + layer.biases)
        return activations

    def predict(self, x: _Vec) -> int:
        """Returns index of the largest logit."""
        return int(_np.argmax(self.forward(x)))

    def qoi(self, x: _Vec, spec: QoISpec) -> float:
        """
        Evaluates quantity of interest at the given input.

        Time complexity:
            ``O(parameters_count)``
        Memory complexity:
            ``O(max_width)``

        :param x: input vector.
        :param spec: selected class and kind of score.
        :returns:
            softmax probability of the class or its raw logit.

        >>> import numpy as np
        >>> network = DenseNetwork([Layer(np.eye(2), np.zeros(2),
        ...                               Activation.IDENTITY)])
        >>> network.qoi(np.zeros(2), QoISpec(1))
        0.5
        """
        return float(self.qoi_many(self._validate_input(x)[None, :],
                                   spec)[0])

    def qoi_many(self, xs: _Mat, spec: QoISpec) -> _Vec:
        """Evaluates quantity of interest for each row of the matrix."""
        self._validate_spec(spec)
        logits = self.forward_many(xs)
        return (logits[:, spec.class_index]
                if spec.score_kind is ScoreKind.LOGIT
                else _activations.softmax(logits)[:, spec.class_index])

    def grad_qoi(self, x: _Vec, spec: QoISpec) -> _Vec:
        """
        Evaluates gradient of quantity of interest w.r.t. the input
        by backpropagation.

        Time complexity:
            ``O(parameters_count)``
        Memory complexity:
            ``O(sum_of_widths)``

        Reference:
            https://en.wikipedia.org/wiki/Backpropagation

        :param x: input vector.
        :param spec: selected class and kind of score.
        :returns: gradient vector of length ``self.input_dim``.

        >>> import numpy as np
        >>> weights = np.array([[1., 2.], [3., 4.]])
        >>> network = DenseNetwork([Layer(weights, np.zeros(2),
        ...                               Activation.IDENTITY)])
        >>> network.grad_qoi(np.zeros(2),
        ...                  QoISpec(1, ScoreKind.LOGIT)).tolist()
        [3.0, 4.0]
        """
        self._validate_spec(spec)
        activations = self._validate_input(x)
        pre_activations = []
        for layer in self._layers:
            pre_activation = layer.weights @ activations + layer.biases
            pre_activations.append(pre_activation)
            activations = _activate(layer, pre_activation)
        if spec.score_kind is ScoreKind.LOGIT:
            upstream = _np.zeros(self.output_dim)
            upstream[spec.class_index] = 1.
        else:
            probabilities = _activations.softmax(activations)
            upstream = -probabilities[spec.class_index] * probabilities
            upstream[spec.class_index] += probabilities[spec.class_index]
        for layer, pre_activation in zip(reversed(self._layers),
                                         reversed(pre_activations)):
            if layer.activation is Activation.SOFTPLUS:
                upstream = upstream * _activations.sigmoid(pre_activation)
            upstream = layer.weights.T @ upstream
        return upstream

    def _validate_input(self, x: _Vec) -> _Vec:
        x = _np.asarray(x, dtype=_np.float64)
        if x.shape != (self.input_dim,):
            raise ValueError('Input should have shape ({},), '
                             'but found: {}.'.format(self.input_dim,
                                                     x.shape))
        return x

    def _validate_spec(self, spec: QoISpec) -> None:
        if spec.class_index >= self.output_dim:
            raise ValueError('Class index {} is out of range for {} classes.'
                             .format(spec.class_index, self.output_dim))


def _activate(layer: Layer, values: _np.ndarray) -> _np.ndarray:
    return (_activations.softplus(values)
            if layer.activation is Activation.SOFTPLUS
            else values)


def softmax(logits: _Vec) -> _Vec:
    """
    Returns shift-stabilized softmax probabilities.

    >>> import numpy as np
    >>> softmax(np.array([0., np.log(3.)])).round(12).tolist()
    [0.25, 0.75]
    """
    return _activations.softmax(_np.asarray(logits, dtype=_np.float64))


class Dataset:
    """Represents labelled inputs lying within a feature range."""

    __slots__ = '_bounds', '_classes_count', '_inputs', '_labels'

    def __init__(self,
                 inputs: _Mat,
                 labels: _Sequence[int],
                 bounds: Bounds = PIXEL_BOUNDS,
                 classes_count: _Optional[int] = None) -> None:
        inputs = _frozen(inputs)
        labels = _np.array(labels, dtype=_np.int64)
        labels.setflags(write=False)
        if inputs.ndim != 2 or labels.shape != (len(inputs),):
            raise ValueError('Inputs of shape {} do not match labels '
                             'of shape {}.'.format(inputs.shape,
                                                   labels.shape))
        low, high = bounds
        if not low < high:
            raise ValueError('Bounds should be increasing, '
                             'but found: {}.'.format(bounds))
        if ((inputs < low) | (inputs > high)).any():
            raise ValueError('Inputs should lie within {}.'.format(bounds))
        if classes_count is None:
            classes_count = int(labels.max()) + 1 if len(labels) else 0
        if len(labels) and not (0 <= labels.min()
                                and labels.max() < classes_count):
            raise ValueError('Labels should lie within [0, {}).'
                             .format(classes_count))
        self._bounds, self._classes_count, self._inputs, self._labels = (
            (float(low), float(high)), classes_count, inputs, labels)

    __repr__ = _generate_repr(__init__)

    def __len__(self) -> int:
        return len(self._labels)

    @property
    def bounds(self) -> Bounds:
        return self._bounds

    @property
    def classes_count(self) -> int:
        return self._classes_count

    @property
    def dimension(self) -> int:
        return self._inputs.shape[1]

    @property
    def inputs(self) -> _Mat:
        return self._inputs

    @property
    def labels(self) -> _np.ndarray:
        return self._labels


class TrainingResult:
    """Represents trained network with its training history."""

    __slots__ = '_accuracy', '_losses', '_network'

    def __init__(self,
                 network: DenseNetwork,
                 accuracy: float,
                 losses: _Sequence[float]) -> None:
        self._accuracy, self._losses, self._network = (accuracy,
                                                       tuple(losses),
                                                       network)

    __repr__ = _generate_repr(__init__)

    @property
    def accuracy(self) -> float:
        """Fraction of correctly predicted training labels."""
        return self._accuracy

    @property
    def losses(self) -> _Sequence[float]:
        """Mean cross-entropy loss of each epoch."""
        return self._losses

    @property
    def network(self) -> DenseNetwork:
        return self._network


def layers_sizes(dimension: int,
                 hidden: _Sequence[int],
                 classes_count: int) -> _List[int]:
    return [dimension, *hidden, classes_count]


def initialize(sizes: _Sequence[int], seed: int) -> DenseNetwork:
    """
    Creates network with weights drawn uniformly
    from ``[-sqrt(6 / (fan_in + fan_out)), sqrt(6 / (fan_in + fan_out))]``
    and zero biases, hidden layers use softplus.

    :param sizes: widths of input, hidden and output layers.
    :param seed: seed of the draws.
    :returns: network.
    """
    if len(sizes) < 2 or min(sizes) < 1:
        raise ValueError('Sizes should contain at least two positive '
                         'widths, but found: {}.'.format(list(sizes)))
    source = _RandomSource(seed)
    layers = []
    for index, (inputs_count, outputs_count) in enumerate(zip(sizes,
                                                              sizes[1:])):
        limit = _sqrt(6. / (inputs_count + outputs_count))
        layers.append(Layer(source.uniform(-limit, limit,
                                           (outputs_count, inputs_count)),
                            _np.zeros(outputs_count),
                            Activation.IDENTITY
                            if index == len(sizes) - 2
                            else Activation.SOFTPLUS))
    return DenseNetwork(layers)


def rescale_inputs(network: DenseNetwork, bounds: Bounds) -> DenseNetwork:
    """
    Returns network acting on raw features from the given range
    equivalent to the given network acting on features mapped onto ``[0, 1]``.
    """
    low, high = bounds
    first, *rest = network.layers
    weights = first.weights / (high - low)
    return DenseNetwork([Layer(weights,
                               first.biases - low * weights.sum(axis=1),
                               first.activation),
                         *rest])


def train_sgd(data: Dataset,
              hidden: _Sequence[int],
              epochs: int,
              learning_rate: float,
              seed: int,
              *,
              batch_size: int = 32) -> TrainingResult:
    """
    Trains network with mini-batch stochastic gradient descent
    on cross-entropy loss.

    Features are mapped from ``data.bounds`` onto ``[0, 1]`` during
    training, the returned network absorbs that map into its first layer
    and acts on raw features.
    With zero epochs the seeded initialization is returned as is.

    Time complexity:
        ``O(epochs * len(data) * parameters_count)``
    Memory complexity:
        ``O(batch_size * max_width + parameters_count)``

    :param data: non-empty training set.
    :param hidden: widths of hidden softplus layers.
    :param epochs: number of passes over the data.
    :param learning_rate: step size.
    :param seed: seed of initialization and shuffling.
    :param batch_size: number of samples per update.
    :returns: trained network, its training accuracy and losses history.
    """
    if not len(data):
        raise ValueError('Training set should be non-empty.')
    if epochs < 0 or batch_size < 1 or not learning_rate > 0.:
        raise ValueError('Epochs should be non-negative, batch size and '
                         'learning rate positive, but found: {}, {}, {}.'
                         .format(epochs, batch_size, learning_rate))
    sizes = layers_sizes(data.dimension, hidden, data.classes_count)
    network = initialize(sizes, seed)
    weights = [_np.array(layer.weights) for layer in network.layers]
    biases = [_np.array(layer.biases) for layer in network.layers]
    activations_kinds = [layer.activation for layer in network.layers]
    low, high = data.bounds
    inputs = (data.inputs - low) / (high - low)
    targets = _np.eye(data.classes_count)[data.labels]
    source = _RandomSource(seed, stream=1)
    losses = []
    for epoch in range(epochs):
        order = source.permutation(len(data))
        total_loss = 0.
        for start in range(0, len(data), batch_size):
            batch = order[start:start + batch_size]
            total_loss += len(batch) * _sgd_step(
                    weights, biases, activations_kinds, inputs[batch],
                    targets[batch], learning_rate)
        loss = total_loss / len(data)
        if not _np.isfinite(loss):
            raise _DivergenceError('Loss became non-finite at epoch {}.'
                                   .format(epoch))
        _logger.debug('epoch %d: mean loss %.6g', epoch, loss)
        losses.append(loss)
    if epochs:
        network = rescale_inputs(
                DenseNetwork([Layer(layer_weights, layer_biases, activation)
                              for layer_weights, layer_biases, activation
                              in zip(weights, biases, activations_kinds)]),
                data.bounds)
    result_accuracy = accuracy(network, data)
    _logger.info('trained %d epochs: train accuracy %.4f',
                 epochs, result_accuracy)
    return TrainingResult(network, result_accuracy, losses)


def _sgd_step(weights: _List[_Mat],
              biases: _List[_Vec],
              activations_kinds: _Sequence[Activation],
              inputs: _Mat,
              targets: _Mat,
              learning_rate: float) -> float:
    layers_inputs, pre_activations = [], []
    activations = inputs
    for layer_weights, layer_biases, activation in zip(weights, biases,
                                                       activations_kinds):
        layers_inputs.append(activations)
        pre_activation = activations @ layer_weights.T + layer_biases
        pre_activations.append(pre_activation)
        activations = (_activations.softplus(pre_activation)
                       if activation is Activation.SOFTPLUS
                       else pre_activation)
    log_probabilities = _activations.log_softmax(activations)
    loss = -float(_np.mean(_np.sum(targets * log_probabilities, axis=1)))
    upstream = (_np.exp(log_probabilities) - targets) / len(inputs)
    for index in reversed(range(len(weights))):
        if activations_kinds[index] is Activation.SOFTPLUS:
            upstream = upstream * _activations.sigmoid(pre_activations[index])
        weights_gradient = upstream.T @ layers_inputs[index]
        biases_gradient = upstream.sum(axis=0)
        upstream = upstream @ weights[index]
        weights[index] -= learning_rate * weights_gradient
        biases[index] -= learning_rate * biases_gradient
    return loss


def accuracy(network: DenseNetwork, data: Dataset) -> float:
    """Returns fraction of inputs whose largest logit matches the label."""
    if not len(data):
        raise ValueError('Dataset should be non-empty.')
    predictions = _np.argmax(network.forward_many(data.inputs), axis=1)
    return float(_np.mean(predictions == data.labels))


def save_weights(network: DenseNetwork, path: str) -> None:
    """
    Writes network parameters in binary format:
    8 magic bytes ``NNAS0001``, little-endian ``u32`` layers count,
    then per layer ``u32`` outputs count, ``u32`` inputs count,
    ``u8`` activation code, row-major ``f64`` weights and ``f64`` biases.
    """
    with open(path, 'wb') as file:
        file.write(_codecs.encode_weights(
                [(layer.weights, layer.biases, int(layer.activation))
                 for layer in network.layers]))


def load_weights(path: str) -> DenseNetwork:
    """Reads network written by ``save_weights``."""
    with open(path, 'rb') as file:
        raw_layers = _codecs.decode_weights(file.read())
    layers = []
    for index, (weights, biases, activation_code) in enumerate(raw_layers):
        try:
            activation = Activation(activation_code)
        except ValueError:
            raise _FormatError('Layer {} has unknown activation code {}.'
                               .format(index, activation_code)) from None
        try:
            layers.append(Layer(weights, biases, activation))
        except ValueError as error:
            raise _FormatError('Layer {}: {}'.format(index, error)) from error
    try:
        return DenseNetwork(layers)
    except ValueError as error:
        raise _FormatError(str(error)) from error


def load_idx(images_path: str,
             labels_path: str,
             *,
             classes_count: int = 10) -> Dataset:
    """
    Reads images and labels in IDX format of the MNIST distribution,
    ``gzip``-compressed files are recognized by ``.gz`` suffix.

    Pixel bytes become features in ``[0, 255]``,
    images are flattened row-major.

    Reference:
        http://yann.lecun.com/exdb/mnist/
    """
    images = _codecs.read_idx(images_path, _codecs.IDX_IMAGES_MAGIC, 3)
    labels = _codecs.read_idx(labels_path, _codecs.IDX_LABELS_MAGIC, 1)
    if len(images) != len(labels):
        raise _FormatError('Images count {} differs from labels count {}.'
                           .format(len(images), len(labels)))
    try:
        return Dataset(images.reshape(len(images), -1).astype(_np.float64),
                       labels.astype(_np.int64), PIXEL_BOUNDS,
                       classes_count)
    except ValueError as error:
        raise _FormatError(str(error)) from error


def make_blobs(dimension: int,
               classes_count: int,
               count: int,
               seed: int,
               *,
               spread: float = 0.1,
               bounds: Bounds = PIXEL_BOUNDS) -> Dataset:
    """
    Generates seeded Gaussian clusters, one per class,
    with centers drawn uniformly from the central half of the range
    and standard deviation ``spread`` times the range width,
    clipped into the range.
    """
    if dimension < 1 or classes_count < 2 or count < 1:
        raise ValueError('Dimension and count should be positive '
                         'and classes count at least 2, but found: '
                         '{}, {}, {}.'.format(dimension, classes_count,
                                              count))
    low, high = bounds
    width = high - low
    source = _RandomSource(seed)
    centers = low + width * source.uniform(0.25, 0.75,
                                           (classes_count, dimension))
    labels = _np.arange(count) % classes_count
    inputs = _np.clip(centers[labels]
                      + spread * width * source.normal((count, dimension)),
                      low, high)
    return Dataset(inputs, labels, bounds, classes_count)


def downsample(data: Dataset, factor: int) -> Dataset:
    """
    Averages square images over ``factor x factor`` pixel blocks.

    >>> import numpy as np
    >>> data = Dataset(np.arange(16.)[None, :], [0], (0., 15.))
    >>> downsample(data, 2).inputs.tolist()
    [[2.5, 4.5, 10.5, 12.5]]
    """
    side = _isqrt(data.dimension)
    if side * side != data.dimension or factor < 1 or side % factor:
        raise ValueError('Images of {} pixels can not be downsampled '
                         'by factor {}.'.format(data.dimension, factor))
    reduced_side = side // factor
    inputs = (data.inputs
              .reshape(len(data), reduced_side, factor, reduced_side, factor)
              .mean(axis=(2, 4))
              .reshape(len(data), -1))
    return Dataset(_np.clip(inputs, *data.bounds), data.labels, data.bounds,
                   data.classes_count)


def split(data: Dataset, count: int) -> _Tuple[Dataset, Dataset]:
    """Splits dataset into first ``count`` samples and the rest."""
    return (Dataset(data.inputs[:count], data.labels[:count], data.bounds,
                    data.classes_count),
            Dataset(data.inputs[count:], data.labels[count:], data.bounds,
                    data.classes_count))
