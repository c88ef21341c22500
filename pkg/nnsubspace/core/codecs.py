import gzip
import struct
from typing import (BinaryIO,
                    List,
                    Tuple)

import numpy as np

from ..errors import (FormatError,
                      TruncatedFileError)

WEIGHTS_MAGIC = b'NNAS0001'
LAYER_HEADER = struct.Struct('<IIB')
LAYERS_COUNT = struct.Struct('<I')
FLOAT_SIZE = 8
IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801
IDX_WORD = struct.Struct('>I')

RawLayer = Tuple[np.ndarray, np.ndarray, int]


def encode_weights(layers: List[RawLayer]) -> bytes:
    chunks = [WEIGHTS_MAGIC, LAYERS_COUNT.pack(len(layers))]
    for weights, biases, activation_code in layers:
        outputs_count, inputs_count = weights.shape
        chunks.append(LAYER_HEADER.pack(outputs_count, inputs_count,
                                        activation_code))
        chunks.append(np.ascontiguousarray(weights, dtype='<f8').tobytes())
        chunks.append(np.ascontiguousarray(biases, dtype='<f8').tobytes())
    return b''.join(chunks)


def decode_weights(data: bytes) -> List[RawLayer]:
    if data[:len(WEIGHTS_MAGIC)] != WEIGHTS_MAGIC:
        raise FormatError('Weights file should start with {!r}, '
                          'but found: {!r}.'
                          .format(WEIGHTS_MAGIC, data[:len(WEIGHTS_MAGIC)]))
    offset = len(WEIGHTS_MAGIC)
    if len(data) < offset + LAYERS_COUNT.size:
        raise TruncatedFileError('Weights file is truncated '
                                 'before layers count.')
    layers_count, = LAYERS_COUNT.unpack_from(data, offset)
    offset += LAYERS_COUNT.size
    result = []
    for index in range(layers_count):
        if len(data) < offset + LAYER_HEADER.size:
            raise TruncatedFileError('Weights file is truncated '
                                     'in header of layer {}.'.format(index))
        outputs_count, inputs_count, activation_code = (
            LAYER_HEADER.unpack_from(data, offset))
        offset += LAYER_HEADER.size
        parameters_count = outputs_count * (inputs_count + 1)
        if len(data) < offset + parameters_count * FLOAT_SIZE:
            raise TruncatedFileError('Weights file is truncated '
                                     'in parameters of layer {}.'
                                     .format(index))
        weights = np.frombuffer(data, dtype='<f8',
                                count=outputs_count * inputs_count,
                                offset=offset)
        offset += weights.nbytes
        biases = np.frombuffer(data, dtype='<f8',
                               count=outputs_count,
                               offset=offset)
        offset += biases.nbytes
        result.append((weights.astype(np.float64)
                       .reshape(outputs_count, inputs_count),
                       biases.astype(np.float64), activation_code))
    if offset != len(data):
        raise FormatError('Weights file has {} trailing bytes.'
                          .format(len(data) - offset))
    return result


def open_binary(path: str) -> BinaryIO:
    return (gzip.open(path, 'rb')
            if str(path).endswith('.gz')
            else open(path, 'rb'))


def read_idx(path: str, magic: int, dimensions_count: int) -> np.ndarray:
    with open_binary(path) as file:
        data = file.read()
    header_size = IDX_WORD.size * (1 + dimensions_count)
    if len(data) < header_size:
        raise TruncatedFileError('IDX file {} is truncated in header.'
                                 .format(path))
    actual_magic, = IDX_WORD.unpack_from(data, 0)
    if actual_magic != magic:
        raise FormatError('IDX file {} should have magic number {:#010x}, '
                          'but found: {:#010x}.'
                          .format(path, magic, actual_magic))
    shape = tuple(IDX_WORD.unpack_from(data, IDX_WORD.size * (1 + index))[0]
                  for index in range(dimensions_count))
    size = int(np.prod(shape))
    if len(data) != header_size + size:
        raise TruncatedFileError('IDX file {} should have {} data bytes, '
                                 'but found: {}.'
                                 .format(path, size,
                                         len(data) - header_size))
    return (np.frombuffer(data, dtype=np.uint8,
                          offset=header_size)
            .reshape(shape))
